//! One function per subcommand. Each returns its output files in memory so
//! they can be digested and written in a fixed order.

use brownlab::brown::{default_floor, stieltjes_exponent};
use brownlab::pseudospec::pseudospectrum_areas;
use brownlab::rng::{stream, Purpose};
use brownlab::walks::{sample_lz, smin_zeroth_block, walk_shift};
use brownlab::*;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::result::Result;

use crate::args::*;
use crate::parse;
use crate::CliError;

/// Files produced by a command plus an optional line for standard output.
#[derive(Debug, Default)]
pub struct Outputs {
    pub files: Vec<(String, Vec<u8>)>,
    pub stdout: Option<String>,
}

impl Outputs {
    fn json(&mut self, name: &str, value: &Value) {
        let mut bytes = serde_json::to_vec_pretty(value).expect("JSON values serialize");
        bytes.push(b'\n');
        self.files.push((name.to_string(), bytes));
    }

    fn with<F>(&mut self, name: &str, write: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut Vec<u8>) -> brownlab::Result<()>,
    {
        let mut bytes = Vec::new();
        write(&mut bytes)?;
        self.files.push((name.to_string(), bytes));
        Ok(())
    }
}

fn pair(z: c64) -> [f64; 2] {
    [z.re, z.im]
}

fn polynomial(a: &PolyArgs) -> Result<NcPoly, CliError> {
    Ok(parse::polynomial(&a.poly, a.vars)?)
}

fn need(cond: bool, message: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(message.to_string()))
    }
}

pub fn run(cmd: &Command) -> Result<Outputs, CliError> {
    match cmd {
        Command::Spectrum(a) => spectrum(a),
        Command::LinearizeCheck(a) => linearize_check(a),
        Command::SminMap(a) => smin_map_cmd(a),
        Command::Tail(a) => tail(a),
        Command::Area(a) => area(a),
        Command::Brown(a) => brown(a),
        Command::Stieltjes(a) => stieltjes_cmd(a),
        Command::WalksDelta(a) => walks_delta(a),
        Command::WalksDettail(a) => walks_dettail(a),
        Command::FreeMoment(a) => free_moment_cmd(a),
        Command::Replay(_) => unreachable!("replay is handled by the driver"),
    }
}

fn spectrum(a: &SpectrumArgs) -> Result<Outputs, CliError> {
    need(a.size >= 1 && a.trials >= 1, "--N and --trials must be at least 1")?;
    let p = polynomial(&a.poly)?;
    let seed = a.common.seed;
    let parts: Vec<brownlab::Result<SpectrumSample64>> = (0..a.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, Purpose::Matrices, t as u64);
            let m: ndarray::Array2<c64> = sample_polynomial(&p, a.size, &mut rng)?;
            esd(&m)
        })
        .collect();
    let mut all = SpectrumSample { eigenvalues: vec![] };
    for part in parts {
        all.extend(part?);
    }
    let mut out = Outputs::default();
    out.with("spectrum.csv", |w| all.write_csv(w))?;
    out.stdout = Some(format!("{} eigenvalues", all.len()));
    Ok(out)
}

fn linearize_check(a: &LinearizeArgs) -> Result<Outputs, CliError> {
    need(a.size >= 1 && a.trials >= 1, "--N and --trials must be at least 1")?;
    let p = polynomial(&a.poly)?;
    let lin = Linearization64::build(&p)?;
    let checks: Vec<brownlab::Result<SchurCheck>> = (0..a.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(a.common.seed, Purpose::Matrices, t as u64);
            let xs: Vec<ndarray::Array2<c64>> = (0..p.num_vars())
                .map(|_| sample_ginibre(a.size, &mut rng).into_inner())
                .collect();
            verify_schur(&lin, &xs, a.z)
        })
        .collect();
    let checks = checks.into_iter().collect::<brownlab::Result<Vec<_>>>()?;
    let worst = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "residual": c.residual,
                "smin_poly": c.smin_poly,
                "smin_lz": c.smin_lz,
                "norm_bound_holds": c.norm_bound_holds(1e-8),
            })
        })
        .collect();
    let mut out = Outputs::default();
    out.json("linearization.json", &serde_json::to_value(lin.to_json())?);
    out.json(
        "schur.json",
        &json!({ "z": pair(a.z), "N": a.size, "checks": rows, "max_residual": worst }),
    );
    out.stdout = Some(format!("rank {}, max residual {worst:e}", lin.rank()));
    Ok(out)
}

fn smin_map_cmd(a: &SminMapArgs) -> Result<Outputs, CliError> {
    let p = polynomial(&a.poly)?;
    let map = smin_map::<c64>(&p, a.size, &a.grid, a.trials, a.common.seed)?;
    let mut out = Outputs::default();
    out.with("smin_map.csv", |w| map.write_csv(w))?;
    out.stdout = Some(format!("{} nodes, {} failed evaluations", a.grid.len(), map.failures));
    Ok(out)
}

fn tail(a: &TailArgs) -> Result<Outputs, CliError> {
    let p = polynomial(&a.poly)?;
    let t = tail_estimate::<c64>(&p, a.size, a.z, &a.eps.0, a.trials, a.common.seed)?;
    let mut out = Outputs::default();
    out.json("tail.json", &t.to_json());
    out.stdout = Some(match t.slope {
        Some(s) => format!("slope {s:.4}"),
        None => "slope undefined (too few hits)".into(),
    });
    Ok(out)
}

fn area(a: &AreaArgs) -> Result<Outputs, CliError> {
    let p = polynomial(&a.poly)?;
    let areas = pseudospectrum_areas::<c64>(&p, a.size, &a.eps.0, &a.grid, a.trials, a.common.seed)?;
    let rows: Vec<Value> = a
        .eps
        .0
        .iter()
        .zip(&areas)
        .map(|(e, v)| json!({ "eps": e, "area": v, "fraction": v / a.grid.area() }))
        .collect();
    let mut out = Outputs::default();
    out.json(
        "area.json",
        &json!({ "N": a.size, "trials": a.trials, "grid": a.grid, "window_area": a.grid.area(), "areas": rows }),
    );
    Ok(out)
}

fn brown(a: &BrownArgs) -> Result<Outputs, CliError> {
    let p = polynomial(&a.poly)?;
    let floor = a.floor.unwrap_or_else(|| default_floor(a.size));
    let field = log_potential_with::<c64>(&p, a.size, &a.grid, a.trials, floor, a.common.seed, a.engine.into())?;
    let est = brown_estimate(&field)?;
    let mut out = Outputs::default();
    out.with("potential.csv", |w| field.write_csv(w))?;
    out.json("potential.json", &field.sidecar_json());
    out.with("brown.csv", |w| est.write_csv(w))?;
    out.json("brown.json", &est.sidecar_json(&field));
    out.stdout = Some(format!("total mass {:.4}", est.total_mass));
    Ok(out)
}

fn stieltjes_cmd(a: &StieltjesArgs) -> Result<Outputs, CliError> {
    let p = polynomial(&a.poly)?;
    let g = stieltjes::<c64>(&p, a.size, a.z, &a.eta.0, a.trials, a.common.seed)?;
    let points: Vec<Value> = a
        .eta
        .0
        .iter()
        .zip(&g)
        .map(|(e, v)| json!({ "eta": e, "re": v.re, "im": v.im }))
        .collect();
    let fit = stieltjes_exponent(&a.eta.0, &g).map(|(c, c2)| json!({ "C": c, "c2": c2 }));
    let mut out = Outputs::default();
    out.json(
        "stieltjes.json",
        &json!({ "z": pair(a.z), "N": a.size, "trials": a.trials, "points": points, "fit": fit }),
    );
    Ok(out)
}

fn walk_setup(poly: &PolyArgs, size: usize, z: c64, block: usize, seed: u64) -> Result<(Linearization64, WalkBasis64), CliError> {
    need(size >= 1, "--N must be at least 1")?;
    need(block < size, "--block must be below N")?;
    let p = polynomial(poly)?;
    let lin = Linearization64::build(&p)?;
    let lz = sample_lz(&lin, size, z, seed, 0)?;
    let u = orthocomplement_basis(&lz, block, seed)?;
    Ok((lin, u))
}

fn walks_delta(a: &WalksDeltaArgs) -> Result<Outputs, CliError> {
    let (lin, u) = walk_setup(&a.poly, a.size, a.z, a.block, a.common.seed)?;
    let r = lin.rank() as f64;
    let threshold = a.threshold.unwrap_or_else(|| (a.size as f64).powf(-r / 2.0 - 10.0));
    let mode = match a.mode {
        ModeArg::Full => DeltaMode::Full,
        ModeArg::Classify => DeltaMode::Classify,
    };
    let report = delta_report(&u, &lin.rotated_s(), threshold, mode)?;
    let smin_u0 = smin_zeroth_block(&u)?;
    let mut value = serde_json::to_value(&report)?;
    value["smin_u0"] = json!(smin_u0);
    let mut out = Outputs::default();
    out.json("delta.json", &value);
    out.with("basis.bin", |w| u.write_binary(w))?;
    out.json("basis.json", &serde_json::to_value(u.header())?);
    out.stdout = Some(format!(
        "max |Delta| = {:e}, structured = {}",
        report.max_abs_delta(),
        report.structured
    ));
    Ok(out)
}

fn walks_dettail(a: &WalksDetTailArgs) -> Result<Outputs, CliError> {
    let (lin, u) = walk_setup(&a.poly, a.size, a.z, a.block, a.common.seed)?;
    let shift = walk_shift(&u, &lin, a.z);
    let mut t = det_tail_experiment(&u, &lin, &shift, &a.eps.0, a.trials, a.common.seed)?;
    t.z = a.z;
    let report = delta_report(&u, &lin.rotated_s(), f64::MIN_POSITIVE, DeltaMode::Full)?;
    let mut value = t.to_json();
    value["delta"] = json!(report.max_abs_delta());
    let mut out = Outputs::default();
    out.json("dettail.json", &value);
    out.stdout = Some(match t.slope {
        Some(s) => format!("slope {s:.4}, delta {:e}", report.max_abs_delta()),
        None => "slope undefined (too few hits)".into(),
    });
    Ok(out)
}

fn free_moment_cmd(a: &FreeMomentArgs) -> Result<Outputs, CliError> {
    let w = StarWord::parse(&a.word)?;
    let m = free_moment(&w);
    let mut out = Outputs::default();
    if a.common.output.is_some() {
        out.json("free_moment.json", &json!({ "word": w.to_string(), "moment": m }));
    }
    out.stdout = Some(m.to_string());
    Ok(out)
}
