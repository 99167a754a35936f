//! Parameter grids written as `start:stop:count`, optionally suffixed with
//! `(log)` for logarithmic spacing. A bare number is a one-point grid.

use crate::error::{Error, Result};

pub const MAX_GRID_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn parse(text: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse { line: 1, reason };
        let text = text.trim();
        let (body, spacing) = match text.strip_suffix("(log)") {
            Some(b) => (b, Spacing::Log),
            None => (text, Spacing::Linear),
        };
        let parts: Vec<&str> = body.split(':').collect();
        let number = |s: &str| -> Result<f64> {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| err(format!("`{s}` is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(err(format!("`{s}` is not finite")))
            }
        };
        let grid = match parts.as_slice() {
            [single] if spacing == Spacing::Linear => {
                let v = number(single)?;
                Grid {
                    start: v,
                    stop: v,
                    count: 1,
                    spacing,
                }
            }
            [start, stop, count] => {
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("`{count}` is not a point count")))?;
                Grid {
                    start: number(start)?,
                    stop: number(stop)?,
                    count,
                    spacing,
                }
            }
            _ => {
                return Err(err(format!(
                    "expected `start:stop:count[(log)]`, got `{text}`"
                )))
            }
        };
        if grid.count == 0 {
            return Err(err("range is empty".into()));
        }
        if grid.count > MAX_GRID_POINTS {
            return Err(err(format!("more than {MAX_GRID_POINTS} points")));
        }
        if grid.spacing == Spacing::Log && !(grid.start > 0.0 && grid.stop > 0.0) {
            return Err(err("logarithmic range needs positive endpoints".into()));
        }
        Ok(grid)
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        let mut out: Vec<f64> = (0..self.count)
            .map(|i| {
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * f,
                    Spacing::Log => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + (b - a) * f)
                    }
                }
            })
            .collect();
        out[0] = self.start;
        out[self.count - 1] = self.stop;
        out
    }

    pub fn is_single(&self) -> bool {
        self.count == 1
    }
}
