//! Moments of free circular elements.
//!
//! The trace of a word `c_{i1}^{e1} ... c_{ik}^{ek}` in free circular
//! elements counts the non-crossing pairings of the positions in which
//! every pair joins equal indices with opposite markers.

use ndarray::Array2;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Marker {
    Plain,
    Adjoint,
}

/// A word in circular variables and their adjoints. Indices are 0-based
/// (`c1` is index 0). The empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StarWord {
    letters: Vec<(usize, Marker)>,
}

impl StarWord {
    pub fn new(letters: Vec<(usize, Marker)>) -> Self {
        StarWord { letters }
    }

    pub fn letters(&self) -> &[(usize, Marker)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Parses whitespace-separated letters such as `"c1 c1* c2 c2*"`.
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.as_bytes();
        let mut pos = 0;
        let mut letters = Vec::new();
        loop {
            while pos < s.len() && s[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos == s.len() {
                break;
            }
            if s[pos] != b'c' {
                return Err(Error::Syntax {
                    offset: pos,
                    message: format!("expected 'c', found '{}'", s[pos] as char),
                });
            }
            pos += 1;
            let start = pos;
            while pos < s.len() && s[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(Error::Syntax {
                    offset: pos,
                    message: "expected digits after 'c'".into(),
                });
            }
            let index: usize = text[start..pos].parse().map_err(|_| Error::Syntax {
                offset: start,
                message: "index too large".into(),
            })?;
            if index == 0 {
                return Err(Error::VariableRange { index: 0, declared: 0 });
            }
            let marker = if pos < s.len() && s[pos] == b'*' {
                pos += 1;
                Marker::Adjoint
            } else {
                Marker::Plain
            };
            letters.push((index - 1, marker));
        }
        Ok(StarWord { letters })
    }

    pub fn num_vars(&self) -> usize {
        self.letters.iter().map(|&(i, _)| i + 1).max().unwrap_or(0)
    }
}

impl fmt::Display for StarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &(i, m)) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "c{}", i + 1)?;
            if m == Marker::Adjoint {
                write!(f, "*")?;
            }
        }
        Ok(())
    }
}

fn pairable(a: (usize, Marker), b: (usize, Marker)) -> bool {
    a.0 == b.0 && a.1 != b.1
}

/// Number of admissible non-crossing pair partitions of `w`.
///
/// Position `i` of a segment pairs with some `m`; the pairing then splits
/// into independent pairings of the inside `(i, m)` and the remainder
/// after `m`, so counts are memoized per interval. Counts stay within
/// `u64` for words of up to 72 letters.
pub fn free_moment(w: &StarWord) -> u64 {
    let k = w.len();
    if k % 2 == 1 {
        return 0;
    }
    let l = &w.letters;
    // count[i][j] = pairings of positions i..j (half-open)
    let mut count = vec![vec![0u64; k + 1]; k + 1];
    for i in 0..=k {
        count[i][i] = 1;
    }
    for len in (2..=k).step_by(2) {
        for i in 0..=(k - len) {
            let j = i + len;
            let mut total = 0u64;
            for m in ((i + 1)..j).step_by(2) {
                if pairable(l[i], l[m]) {
                    let inside = count[i + 1][m];
                    let outside = count[m + 1][j];
                    total = total
                        .checked_add(inside.checked_mul(outside).expect("moment overflows u64"))
                        .expect("moment overflows u64");
                }
            }
            count[i][j] = total;
        }
    }
    count[0][k]
}

/// Normalized trace `(1/N) Tr(X_{i1}^{e1} ... X_{ik}^{ek})`.
pub fn star_trace<K: Field>(w: &StarWord, xs: &[Array2<K>]) -> Result<K> {
    let n = xs
        .first()
        .map(|x| x.nrows())
        .ok_or_else(|| Error::Dimension("no matrices supplied".into()))?;
    if w.num_vars() > xs.len() {
        return Err(Error::Dimension(format!(
            "word uses c{} but only {} matrices were given",
            w.num_vars(),
            xs.len()
        )));
    }
    let mut acc: Option<Array2<K>> = None;
    for &(i, m) in &w.letters {
        let factor = match m {
            Marker::Plain => xs[i].clone(),
            Marker::Adjoint => xs[i].t().mapv(|z| z.conj()),
        };
        acc = Some(match acc {
            None => factor,
            Some(a) => a.dot(&factor),
        });
    }
    let tr = match acc {
        None => K::from_real(K::real(n as f64)),
        Some(a) => a.diag().iter().copied().sum(),
    };
    Ok(tr.div_real(K::real(n as f64)))
}
