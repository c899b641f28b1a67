//! Non-commutative polynomials with complex coefficients.
//!
//! A polynomial in `x1..xn` is stored as a sparse map from words (ordered
//! products of variables) to coefficients. Letters are 0-based internally;
//! `x1` is letter 0.

mod moments;
mod parse;

pub use moments::{free_moment, star_trace, Marker, StarWord};
pub use parse::{parse, parse_with_vars};

use ndarray::{Array1, Array2};
use ndarray_linalg::{JobSvd, SVDDC};
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{c64, Field};

/// Relative cutoff below which a singular value of the coefficient matrix
/// does not count toward its rank.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// An ordered product of variables. Ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse non-commutative polynomial in `num_vars` variables.
///
/// Invariants: no stored coefficient is exactly zero and every letter is
/// below `num_vars`.
#[derive(Clone, Debug, PartialEq)]
pub struct NcPoly {
    num_vars: usize,
    terms: BTreeMap<Word, c64>,
}

impl NcPoly {
    pub fn zero(num_vars: usize) -> Self {
        NcPoly {
            num_vars: num_vars.max(1),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: c64) -> Self {
        Self::from_terms(num_vars, [(Word::empty(), c)]).expect("constant has no letters")
    }

    /// The variable `x{index+1}`.
    pub fn var(num_vars: usize, index: usize) -> Result<Self> {
        Self::from_terms(num_vars, [(Word(vec![index]), c64::new(1.0, 0.0))])
    }

    /// Collects like terms; fails if a letter is out of range.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, c64)>,
    {
        let mut p = NcPoly::zero(num_vars);
        for (w, c) in terms {
            if let Some(&bad) = w.0.iter().find(|&&l| l >= p.num_vars) {
                return Err(Error::VariableRange {
                    index: bad + 1,
                    declared: p.num_vars,
                });
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, w: Word, c: c64) {
        let entry = self.terms.entry(w.clone()).or_insert_with(c64::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Same polynomial viewed in at least `n` variables.
    pub fn with_num_vars(mut self, n: usize) -> Result<Self> {
        if n < self.used_vars() {
            return Err(Error::VariableRange {
                index: self.used_vars(),
                declared: n,
            });
        }
        self.num_vars = n.max(1);
        Ok(self)
    }

    /// One plus the largest letter appearing in a stored word (0 if none).
    pub fn used_vars(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|w| w.0.iter())
            .map(|&l| l + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &c64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> c64 {
        self.terms.get(w).copied().unwrap_or_else(c64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero(self.num_vars.max(other.num_vars));
        for (w, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(w.clone(), *c);
        }
        out
    }

    pub fn scale(&self, s: c64) -> NcPoly {
        let mut out = NcPoly::zero(self.num_vars);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        self.add(&other.scale(c64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero(self.num_vars.max(other.num_vars));
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Matrix value `p(X_1, ..., X_n)`; the empty word contributes
    /// `coefficient * Id`.
    pub fn evaluate<K: Field>(&self, xs: &[Array2<K>]) -> Result<Array2<K>> {
        if xs.len() < self.num_vars {
            return Err(Error::Dimension(format!(
                "polynomial has {} variables but {} matrices were given",
                self.num_vars,
                xs.len()
            )));
        }
        let n = xs.first().map(|x| x.nrows()).ok_or_else(|| {
            Error::Dimension("at least one matrix is needed to fix the size".into())
        })?;
        if let Some(bad) = xs.iter().find(|x| x.nrows() != n || x.ncols() != n) {
            return Err(Error::Dimension(format!(
                "expected {n}x{n} matrices, found {}x{}",
                bad.nrows(),
                bad.ncols()
            )));
        }
        let terms: Vec<(&[usize], c64)> = self.terms.iter().map(|(w, c)| (w.letters(), *c)).collect();
        Ok(match eval_trie(&terms, xs) {
            Partial::Scalar(c) => Array2::from_diag_elem(n, c),
            Partial::Matrix(m) => m,
        })
    }
}

enum Partial<K> {
    Scalar(K),
    Matrix(Array2<K>),
}

/// Evaluates `sum c_w X_w` by factoring out the first letter: every distinct
/// non-terminal prefix costs one matrix product.
fn eval_trie<K: Field>(terms: &[(&[usize], c64)], xs: &[Array2<K>]) -> Partial<K> {
    let mut constant = K::zero();
    let mut groups: BTreeMap<usize, Vec<(&[usize], c64)>> = BTreeMap::new();
    for &(w, c) in terms {
        match w.split_first() {
            None => constant += K::from_c64(c),
            Some((&l, rest)) => groups.entry(l).or_default().push((rest, c)),
        }
    }
    let mut acc: Option<Array2<K>> = None;
    for (l, group) in groups {
        let contribution = match eval_trie(&group, xs) {
            Partial::Scalar(c) => xs[l].mapv(|x| x * c),
            Partial::Matrix(m) => xs[l].dot(&m),
        };
        acc = Some(match acc {
            None => contribution,
            Some(a) => a + contribution,
        });
    }
    match acc {
        None => Partial::Scalar(constant),
        Some(mut m) => {
            if !constant.is_zero() {
                for i in 0..m.nrows() {
                    m[[i, i]] += constant;
                }
            }
            Partial::Matrix(m)
        }
    }
}

fn fmt_float(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for NcPoly {
    /// Canonical text accepted by [`parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let vars: Vec<String> = w.0.iter().map(|l| format!("x{}", l + 1)).collect();
            let vars = vars.join("*");
            let (negative, coeff) = if c.im == 0.0 {
                let neg = c.re.is_sign_negative();
                let mag = c.re.abs();
                let text = if mag == 1.0 && !w.is_empty() {
                    String::new()
                } else {
                    fmt_float(mag)
                };
                (neg, text)
            } else if c.re == 0.0 {
                (c.im.is_sign_negative(), format!("{}i", fmt_float(c.im.abs())))
            } else {
                let sign = if c.im.is_sign_negative() { '-' } else { '+' };
                (
                    false,
                    format!("({}{}{}i)", fmt_float(c.re), sign, fmt_float(c.im.abs())),
                )
            };
            let sep = match (k, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{sep}")?;
            match (coeff.is_empty(), vars.is_empty()) {
                (true, _) => write!(f, "{vars}")?,
                (false, true) => write!(f, "{coeff}")?,
                (false, false) => write!(f, "{coeff}*{vars}")?,
            }
        }
        Ok(())
    }
}

/// Coefficients of a polynomial of degree at most two:
/// `p(x) = sum a[l][m] x_l x_m + sum b[l] x_l + gamma`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticData {
    pub a: Array2<c64>,
    pub b: Array1<c64>,
    pub gamma: c64,
    pub rank: usize,
}

impl QuadraticData {
    pub fn from_poly(p: &NcPoly) -> Result<Self> {
        if p.degree() > 2 {
            return Err(Error::Degree {
                found: p.degree(),
                context: "quadratic data needs degree at most 2",
            });
        }
        let n = p.num_vars();
        let mut a = Array2::<c64>::zeros((n, n));
        let mut b = Array1::<c64>::zeros(n);
        let mut gamma = c64::zero();
        for (w, c) in p.terms() {
            match w.letters() {
                [] => gamma = *c,
                [l] => b[*l] = *c,
                [l, m] => a[[*l, *m]] = *c,
                _ => unreachable!("degree checked above"),
            }
        }
        let rank = numerical_rank(&a)?;
        Ok(QuadraticData { a, b, gamma, rank })
    }

    pub fn num_vars(&self) -> usize {
        self.b.len()
    }

    pub fn to_poly(&self) -> NcPoly {
        let n = self.num_vars();
        let mut terms = vec![(Word::empty(), self.gamma)];
        for l in 0..n {
            terms.push((Word(vec![l]), self.b[l]));
            for m in 0..n {
                terms.push((Word(vec![l, m]), self.a[[l, m]]));
            }
        }
        NcPoly::from_terms(n, terms).expect("letters below n")
    }
}

/// Shorthand for [`QuadraticData::from_poly`].
pub fn quadratic_data(p: &NcPoly) -> Result<QuadraticData> {
    QuadraticData::from_poly(p)
}

/// Number of singular values above `RANK_TOLERANCE * sigma_max`.
pub fn numerical_rank(a: &Array2<c64>) -> Result<usize> {
    if a.is_empty() {
        return Ok(0);
    }
    let (_, s, _) = a.svddc(JobSvd::None)?;
    let smax = s.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > RANK_TOLERANCE * smax).count())
}
