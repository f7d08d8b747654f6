use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// A non-empty list of finite values: a scalar, a comma list, or
/// `start:stop:count` spaced evenly in log.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    text: String,
    values: Vec<f64>,
}

impl Grid {
    pub fn scalar(x: f64) -> Self {
        Self {
            text: format!("{x}"),
            values: vec![x],
        }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        let text = values.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        Self { text, values }
    }

    /// `count` log-spaced points from `start` to `stop` inclusive.
    pub fn log(start: f64, stop: f64, count: usize) -> Self {
        let values = log_space(start, stop, count);
        Self {
            text: format!("{start}:{stop}:{count}"),
            values,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The single value, if the grid has exactly one.
    pub fn single(&self) -> Option<f64> {
        match self.values.as_slice() {
            [x] => Some(*x),
            _ => None,
        }
    }
}

pub fn log_space(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let (a, b) = (start.ln(), stop.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                start
            } else if i == count - 1 {
                stop
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

fn parse_number(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", s.trim()))?;
    if !x.is_finite() {
        return Err(format!("`{}` is not finite", s.trim()));
    }
    Ok(x)
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let text = s.trim().to_string();
        if text.is_empty() {
            return Err("empty grid".into());
        }
        let values = if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            let [start, stop, count] = parts.as_slice() else {
                return Err(format!("`{text}`: expected start:stop:count"));
            };
            let (start, stop) = (parse_number(start)?, parse_number(stop)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| format!("`{}` is not a point count", count.trim()))?;
            if count == 0 {
                return Err("a grid needs at least one point".into());
            }
            if start <= 0.0 || stop <= 0.0 {
                return Err(format!("`{text}`: log grid bounds must be > 0"));
            }
            log_space(start, stop, count)
        } else {
            text.split(',').map(parse_number).collect::<Result<Vec<_>, _>>()?
        };
        Ok(Self { text, values })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.values.serialize(serializer)
    }
}
