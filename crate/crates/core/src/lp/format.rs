//! Plain-text LP format.
//!
//! ```text
//! n_vars m_cons max|min
//! q_1 ... q_n
//! g_11 ... g_1n | p_1
//! ...
//! g_m1 ... g_mn | p_m
//! s_1 ... s_n          (1 = nonnegative, 0 = free)
//! ```
//!
//! Values are written with 17 significant digits so a write/read cycle is
//! exact. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use super::{Sense, StandardFormLP, VarSign};
use crate::error::{Error, Result};

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl StandardFormLP {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let sense = match self.sense() {
            Sense::Maximize => "max",
            Sense::Minimize => "min",
        };
        writeln!(out, "{} {} {}", self.n_vars(), self.n_cons(), sense).unwrap();
        let obj: Vec<String> = self.objective().iter().map(|v| fmt_f64(*v)).collect();
        writeln!(out, "{}", obj.join(" ")).unwrap();
        for i in 0..self.n_cons() {
            let row: Vec<String> = self
                .constraint_matrix()
                .row(i)
                .iter()
                .map(|v| fmt_f64(*v))
                .collect();
            writeln!(out, "{} | {}", row.join(" "), fmt_f64(self.rhs()[i])).unwrap();
        }
        let mask: Vec<&str> = self
            .sign_mask()
            .iter()
            .map(|s| if s.is_nonnegative() { "1" } else { "0" })
            .collect();
        writeln!(out, "{}", mask.join(" ")).unwrap();
        out
    }

    pub fn write_text(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read_text(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.parse()
    }
}

fn parse_num(tok: &str, row: usize, column: usize) -> Result<f64> {
    tok.parse::<f64>().map_err(|_| Error::Parse {
        row,
        column,
        message: format!("expected a number, found {tok:?}"),
    })
}

impl FromStr for StandardFormLP {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let eof = |what: &str| Error::Parse {
            row: 0,
            column: 0,
            message: format!("unexpected end of input, expected {what}"),
        };

        let (hrow, header) = lines.next().ok_or_else(|| eof("header"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse {
                row: hrow,
                column: 1,
                message: "header must be `n_vars m_cons sense`".into(),
            });
        }
        let n: usize = toks[0].parse().map_err(|_| Error::Parse {
            row: hrow,
            column: 1,
            message: "bad n_vars".into(),
        })?;
        let m: usize = toks[1].parse().map_err(|_| Error::Parse {
            row: hrow,
            column: 2,
            message: "bad m_cons".into(),
        })?;
        let sense = match toks[2].to_ascii_lowercase().as_str() {
            "max" | "maximize" => Sense::Maximize,
            "min" | "minimize" => Sense::Minimize,
            other => {
                return Err(Error::Parse {
                    row: hrow,
                    column: 3,
                    message: format!("unknown sense {other:?}"),
                })
            }
        };

        let (orow, obj_line) = lines.next().ok_or_else(|| eof("objective row"))?;
        let obj = obj_line
            .split_whitespace()
            .enumerate()
            .map(|(j, t)| parse_num(t, orow, j + 1))
            .collect::<Result<Vec<_>>>()?;
        if obj.len() != n {
            return Err(Error::DimensionMismatch {
                context: "objective row",
                expected: n,
                found: obj.len(),
            });
        }

        let mut g = DMatrix::zeros(m, n);
        let mut p = DVector::zeros(m);
        for i in 0..m {
            let (row, line) = lines.next().ok_or_else(|| eof("constraint row"))?;
            let vals = line
                .split_whitespace()
                .filter(|t| *t != "|")
                .enumerate()
                .map(|(j, t)| parse_num(t, row, j + 1))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != n + 1 {
                return Err(Error::DimensionMismatch {
                    context: "constraint row",
                    expected: n + 1,
                    found: vals.len(),
                });
            }
            for j in 0..n {
                g[(i, j)] = vals[j];
            }
            p[i] = vals[n];
        }

        let mask = match lines.next() {
            None => vec![VarSign::NonNegative; n],
            Some((row, line)) => line
                .split_whitespace()
                .enumerate()
                .map(|(j, t)| match t {
                    "1" | "+" | "nonneg" => Ok(VarSign::NonNegative),
                    "0" | "free" => Ok(VarSign::Free),
                    other => Err(Error::Parse {
                        row,
                        column: j + 1,
                        message: format!("bad sign flag {other:?}"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?,
        };

        StandardFormLP::new(DVector::from_vec(obj), g, p, sense, mask)
    }
}
