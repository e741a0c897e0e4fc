use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::exact_math::{format_rational, int, parse_rational, rat, ExactScalar};

/// Parameters of the rationalized universal body and its family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    /// Family size is `3 * m`.
    pub m: usize,
    /// Number of front paths beyond the first (`J`).
    pub path_depth: usize,
    /// Number of edges kept on the truncated horizontal path (`M`).
    pub gamma_length: usize,
    /// Back displacement: the back segment sits at `y = -t`.
    pub t: ExactScalar,
    /// Rational stand-in for `sum 1/k^2`.
    pub zeta2: ExactScalar,
    /// Rational stand-in for `sum 1/k^3`.
    pub zeta3: ExactScalar,
}

impl ConstructionParams {
    /// Defaults: `J = m + 1`, `M = m + 2`, `t = 2`, `zeta2 = 33/20`, `zeta3 = 6/5`.
    pub fn new(m: usize) -> Self {
        Self {
            m,
            path_depth: m + 1,
            gamma_length: m + 2,
            t: int(2),
            zeta2: rat(33, 20),
            zeta3: rat(6, 5),
        }
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        let bad = |msg: String| Err(ConstructionError::InvalidParams(msg));
        if self.m < 1 {
            return bad("m must be at least 1".into());
        }
        if self.path_depth < self.m + 1 {
            return bad(format!("path depth {} < m + 1 = {}", self.path_depth, self.m + 1));
        }
        if self.gamma_length < self.m + 2 {
            return bad(format!("gamma length {} < m + 2 = {}", self.gamma_length, self.m + 2));
        }
        if !(self.zeta2 > rat(3, 2) && self.zeta2 < rat(7, 4)) {
            return bad(format!("zeta2 = {} outside (3/2, 7/4)", format_rational(&self.zeta2)));
        }
        if !(self.zeta3 > int(1) && self.zeta3 < rat(5, 4)) {
            return bad(format!("zeta3 = {} outside (1, 5/4)", format_rational(&self.zeta3)));
        }
        if self.t <= self.zeta2 {
            return bad(format!("t = {} must exceed zeta2", format_rational(&self.t)));
        }
        let depth = self.path_depth.max(self.gamma_length);
        let s2 = partial_zeta(2, depth);
        let s3 = partial_zeta(3, depth);
        if self.zeta2 <= s2 {
            return bad(format!(
                "zeta2 = {} does not exceed the partial sum {} of 1/k^2 up to {depth}",
                format_rational(&self.zeta2),
                format_rational(&s2)
            ));
        }
        if self.zeta3 <= s3 {
            return bad(format!(
                "zeta3 = {} does not exceed the partial sum {} of 1/k^3 up to {depth}",
                format_rational(&self.zeta3),
                format_rational(&s3)
            ));
        }
        Ok(())
    }

    /// Applies `key=value` overrides (`m`, `depth`, `gamma_len`, `t`, `zeta2`, `zeta3`).
    /// Changing `m` first resets depth and length to their defaults for that `m`.
    pub fn with_overrides(&self, entries: &BTreeMap<String, String>) -> Result<Self, ConstructionError> {
        let mut p = self.clone();
        let count = |key: &str, v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| ConstructionError::InvalidParams(format!("{key}: not a count: {v:?}")))
        };
        let scalar = |key: &str, v: &str| {
            parse_rational(v).map_err(|e| ConstructionError::InvalidParams(format!("{key}: {e}")))
        };
        if let Some(v) = entries.get("m") {
            p = ConstructionParams {
                t: p.t,
                zeta2: p.zeta2,
                zeta3: p.zeta3,
                ..ConstructionParams::new(count("m", v)?)
            };
        }
        for (key, v) in entries {
            match key.as_str() {
                "m" => {}
                "depth" | "path_depth" => p.path_depth = count(key, v)?,
                "gamma_len" | "gamma_length" => p.gamma_length = count(key, v)?,
                "t" => p.t = scalar(key, v)?,
                "zeta2" => p.zeta2 = scalar(key, v)?,
                "zeta3" => p.zeta3 = scalar(key, v)?,
                _ => {}
            }
        }
        Ok(p)
    }

    pub fn to_record(&self) -> ParamsRecord {
        ParamsRecord {
            m: self.m,
            path_depth: self.path_depth,
            gamma_length: self.gamma_length,
            t: format_rational(&self.t),
            zeta2: format_rational(&self.zeta2),
            zeta3: format_rational(&self.zeta3),
        }
    }
}

/// Serializable view of [`ConstructionParams`] with rationals as `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub m: usize,
    pub path_depth: usize,
    pub gamma_length: usize,
    pub t: String,
    pub zeta2: String,
    pub zeta3: String,
}

/// `sum_{k=1}^{n} k^{-s}`.
pub fn partial_zeta(s: u32, n: usize) -> ExactScalar {
    (1..=n as i64).fold(int(0), |acc, k| acc + BigRational::new(1.into(), num_traits::pow(k.into(), s as usize)))
}
