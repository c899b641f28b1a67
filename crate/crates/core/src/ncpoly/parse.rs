//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ('+' | '-') factor | coeff | var | '(' expr ')'
//! var    := 'x' digits
//! coeff  := float | float 'i'
//! ```
//!
//! A parenthesised complex literal such as `(1-2i)` is an ordinary
//! parenthesised expression. Whitespace is ignored between tokens.

use num_traits::One;

use super::{NcPoly, Word};
use crate::error::{Error, Result};
use crate::scalar::c64;

/// Parses `text`; the number of variables is the largest index used
/// (at least 1).
pub fn parse(text: &str) -> Result<NcPoly> {
    Parser::new(text, None).run()
}

/// Parses `text` in exactly `num_vars` variables; an index above
/// `num_vars` is an error.
pub fn parse_with_vars(text: &str, num_vars: usize) -> Result<NcPoly> {
    if num_vars == 0 {
        return Err(Error::Precondition("number of variables must be positive".into()));
    }
    Parser::new(text, Some(num_vars)).run()
}

/// Products are built on (letters, coefficient) lists and only turned into
/// an `NcPoly` once the variable count is known.
type Terms = Vec<(Vec<usize>, c64)>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    declared: Option<usize>,
    max_var: usize,
}

fn syntax<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Syntax {
        offset,
        message: message.into(),
    })
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, declared: Option<usize>) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            declared,
            max_var: 0,
        }
    }

    fn run(mut self) -> Result<NcPoly> {
        let terms = self.expr()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return syntax(self.pos, format!("unexpected '{}'", self.src[self.pos] as char));
        }
        let n = self.declared.unwrap_or(self.max_var.max(1));
        NcPoly::from_terms(n, terms.into_iter().map(|(w, c)| (Word::new(w), c)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Terms> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let mut rhs = self.term()?;
            if op == b'-' {
                negate(&mut rhs);
            }
            acc.extend(rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            let mut prod = Vec::with_capacity(acc.len() * rhs.len());
            for (w1, c1) in &acc {
                for (w2, c2) in &rhs {
                    let mut w = w1.clone();
                    w.extend_from_slice(w2);
                    prod.push((w, c1 * c2));
                }
            }
            acc = prod;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Terms> {
        match self.peek() {
            None => syntax(self.pos, "unexpected end of input"),
            Some(b'-') => {
                self.pos += 1;
                let mut f = self.factor()?;
                negate(&mut f);
                Ok(f)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => syntax(self.pos, format!("missing ')' for '(' at byte {open}")),
                }
            }
            Some(b'x') => self.var(),
            Some(c) if c.is_ascii_digit() || c == b'.' => self.coeff(),
            Some(c) => syntax(self.pos, format!("unexpected '{}'", c as char)),
        }
    }

    fn var(&mut self) -> Result<Terms> {
        let start = self.pos;
        self.pos += 1; // 'x'
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits_start == self.pos {
            return syntax(self.pos, "expected digits after 'x'");
        }
        let text = std::str::from_utf8(&self.src[digits_start..self.pos]).expect("ascii digits");
        let index: usize = match text.parse() {
            Ok(i) => i,
            Err(_) => return syntax(start, "variable index too large"),
        };
        if index == 0 {
            return Err(Error::VariableRange {
                index: 0,
                declared: self.declared.unwrap_or(0),
            });
        }
        if let Some(n) = self.declared {
            if index > n {
                return Err(Error::VariableRange { index, declared: n });
            }
        }
        self.max_var = self.max_var.max(index);
        Ok(vec![(vec![index - 1], c64::one())])
    }

    fn coeff(&mut self) -> Result<Terms> {
        let start = self.pos;
        let s = self.src;
        let mut p = self.pos;
        while p < s.len() && s[p].is_ascii_digit() {
            p += 1;
        }
        if p < s.len() && s[p] == b'.' {
            p += 1;
            while p < s.len() && s[p].is_ascii_digit() {
                p += 1;
            }
        }
        if p < s.len() && (s[p] == b'e' || s[p] == b'E') {
            let mut q = p + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            let exp_digits = q;
            while q < s.len() && s[q].is_ascii_digit() {
                q += 1;
            }
            if q == exp_digits {
                return syntax(q, "malformed exponent");
            }
            p = q;
        }
        let text = std::str::from_utf8(&s[start..p]).expect("ascii number");
        let value: f64 = match text.parse() {
            Ok(v) => v,
            Err(_) => return syntax(start, format!("malformed number '{text}'")),
        };
        self.pos = p;
        let c = if self.pos < s.len() && s[self.pos] == b'i' {
            self.pos += 1;
            c64::new(0.0, value)
        } else {
            c64::new(value, 0.0)
        };
        Ok(vec![(Vec::new(), c)])
    }
}

fn negate(t: &mut Terms) {
    for (_, c) in t.iter_mut() {
        *c = -*c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[usize]) -> Word {
        Word::new(v.to_vec())
    }

    #[test]
    fn anticommutator() {
        let p = parse("x1*x2 + x2*x1").unwrap();
        assert_eq!(p.num_vars(), 2);
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coefficient(&w(&[0, 1])), c64::new(1.0, 0.0));
        assert_eq!(p.coefficient(&w(&[1, 0])), c64::new(1.0, 0.0));
    }

    #[test]
    fn zero_polynomial() {
        let p = parse("0").unwrap();
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn three_variable_example() {
        let p = parse("x1*x2 - 0.3*x2*x3 + 0.1*x3*x1").unwrap();
        assert_eq!(p.num_vars(), 3);
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.coefficient(&w(&[0, 1])), c64::new(1.0, 0.0));
        assert_eq!(p.coefficient(&w(&[1, 2])), c64::new(-0.3, 0.0));
        assert_eq!(p.coefficient(&w(&[2, 0])), c64::new(0.1, 0.0));
    }

    #[test]
    fn complex_literals() {
        let p = parse("(1+2i)*x1 + 3i + (0.5 - 1e-1i)").unwrap();
        assert_eq!(p.coefficient(&w(&[0])), c64::new(1.0, 2.0));
        assert_eq!(p.coefficient(&w(&[])), c64::new(0.5, 2.9));
    }

    #[test]
    fn distributes_parentheses() {
        let p = parse("(x1 + x2)*(x1 - x2)").unwrap();
        assert_eq!(p, parse("x1*x1 - x1*x2 + x2*x1 - x2*x2").unwrap());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("x1 + * x2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        match parse("x1 x2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(x1 + x2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x"), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse("1e"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
    }

    #[test]
    fn variable_range_errors() {
        assert!(matches!(parse("x0"), Err(Error::VariableRange { index: 0, .. })));
        assert!(matches!(
            parse_with_vars("x1*x3", 2),
            Err(Error::VariableRange { index: 3, declared: 2 })
        ));
        let p = parse_with_vars("x1", 3).unwrap();
        assert_eq!(p.num_vars(), 3);
    }
}
