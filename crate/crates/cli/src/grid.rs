//! Scalar, vector and grid arguments.

use std::f64::consts::PI;
use std::str::FromStr;

use envelope_witness::linalg::BlochVector;

use crate::error::{config_err, CliError, Result};

/// Parses a real number, also accepting multiples of π such as `pi`,
/// `3pi/8`, `-pi/2` or `2*pi`.
pub fn parse_scalar(text: &str) -> Result<f64> {
    let s = text.trim();
    let bad = || CliError::Config(format!("cannot parse number '{text}'"));
    let lower = s.to_ascii_lowercase();
    let Some(pos) = lower.find("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let (coef, rest) = lower.split_at(pos);
    let coef = coef.trim().trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = rest[2..].trim();
    let denom = if rest.is_empty() {
        1.0
    } else {
        rest.strip_prefix('/')
            .ok_or_else(bad)?
            .trim()
            .parse::<f64>()
            .map_err(|_| bad())?
    };
    Ok(coef * PI / denom)
}

pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(parse_scalar).collect()
}

pub fn parse_bloch(text: &str) -> Result<BlochVector> {
    match parse_list(text)?.as_slice() {
        &[x, y, z] => Ok(BlochVector::new(x, y, z)),
        other => config_err(format!(
            "expected three comma-separated components, got {} in '{text}'",
            other.len()
        )),
    }
}

/// Nine row-major entries of a real 3×3 matrix.
pub fn parse_mat3(text: &str) -> Result<[[f64; 3]; 3]> {
    let v = parse_list(text)?;
    if v.len() != 9 {
        return config_err(format!(
            "expected nine comma-separated entries, got {}",
            v.len()
        ));
    }
    Ok(std::array::from_fn(|j| {
        std::array::from_fn(|k| v[3 * j + k])
    }))
}

/// Evenly spaced samples `start, …, end`.
///
/// `n ≥ 2` needs `end > start`; `n = 1` evaluates the single point
/// `start` and needs `end == start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, n: usize) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() {
            return config_err("grid bounds must be finite");
        }
        match n {
            0 => config_err("grid needs at least one point"),
            1 if start != end => config_err("a single-point grid needs start == end"),
            2.. if end <= start => {
                config_err(format!("grid end ({end}) must exceed start ({start})"))
            }
            _ => Ok(Self { start, end, n }),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i == self.n - 1 {
                    self.end
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = CliError;

    /// `start,end,n`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        let &[a, b, n] = parts.as_slice() else {
            return config_err(format!("grid must be 'start,end,n', got '{s}'"));
        };
        let n = n.trim().parse::<usize>().map_err(|_| {
            CliError::Config(format!("grid point count '{n}' is not a whole number"))
        })?;
        Self::new(parse_scalar(a)?, parse_scalar(b)?, n)
    }
}

/// Which axis a grid was given on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeAxis {
    /// Physical time `t`.
    Time(Grid),
    /// Dimensionless `α = Jt`.
    Alpha(Grid),
}

impl TimeAxis {
    /// `(t, α)` pairs for coupling `j`. The axis the grid was given on is
    /// reproduced exactly; the other is derived.
    pub fn samples(&self, j: f64) -> Vec<(f64, f64)> {
        match self {
            TimeAxis::Time(g) => g.points().into_iter().map(|t| (t, j * t)).collect(),
            TimeAxis::Alpha(g) => g.points().into_iter().map(|a| (a / j, a)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_with_pi() {
        assert_eq!(parse_scalar("0.25").unwrap(), 0.25);
        assert_eq!(parse_scalar("pi").unwrap(), PI);
        assert_eq!(parse_scalar("3pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_scalar("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_scalar("2*pi").unwrap(), 2.0 * PI);
        assert!(parse_scalar("pie").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn grids() {
        let g: Grid = "0,1,5".parse().unwrap();
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let single: Grid = "3pi/8,3pi/8,1".parse().unwrap();
        assert_eq!(single.points(), vec![3.0 * PI / 8.0]);
        assert!("0,1,1".parse::<Grid>().is_err());
        assert!("1,0,4".parse::<Grid>().is_err());
        assert!("0,1,0".parse::<Grid>().is_err());
        assert!("0,1".parse::<Grid>().is_err());
        assert!("0,1,2.5".parse::<Grid>().is_err());
    }

    #[test]
    fn alpha_axis_keeps_alpha_exact() {
        let axis = TimeAxis::Alpha("0,pi,3".parse().unwrap());
        let s = axis.samples(2.0);
        assert_eq!(s[1], (PI / 4.0, PI / 2.0));
    }

    #[test]
    fn vectors() {
        assert_eq!(
            parse_bloch("0,0,0.5").unwrap(),
            BlochVector::new(0.0, 0.0, 0.5)
        );
        assert!(parse_bloch("0,0").is_err());
        let m = parse_mat3("1,2,3,4,5,6,7,8,9").unwrap();
        assert_eq!(m[1][2], 6.0);
        assert!(parse_mat3("1,2,3").is_err());
    }
}
