//! Hash instance parameters and their JSON descriptor.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::walk::{angle_in_standard_range, check_node_count};

/// Version written into parameter descriptors and reports.
pub const SCHEMA_VERSION: u32 = 1;

/// `10^l` must exceed `2^m` by at least this factor.
pub const DIGIT_MARGIN: f64 = 1e3;

/// Largest `l` for which `p * 10^l` keeps integer resolution in an `f64`.
pub const MAX_DIGITS: u32 = 15;

/// Parameters of one hash instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HashParams {
    /// Nodes on the cycle (odd).
    pub n: usize,
    /// Bits contributed by each node.
    pub m: u32,
    /// Decimal digits of each probability used.
    pub l: u32,
    /// Coin angle of one-step-memory steps (message bit 0).
    pub theta0: f64,
    /// Coin angle of two-step-memory steps (message bit 1).
    pub theta1: f64,
    /// Initial state angle.
    pub alpha: f64,
}

impl HashParams {
    pub fn validate(&self) -> Result<()> {
        check_node_count(self.n)?;
        if self.m == 0 || self.m > 32 {
            return Err(invalid(format!("m must be in 1..=32, got {}", self.m)));
        }
        if self.l == 0 || self.l > MAX_DIGITS {
            return Err(invalid(format!(
                "l must be in 1..={MAX_DIGITS}, got {}",
                self.l
            )));
        }
        if 10f64.powi(self.l as i32) < 2f64.powi(self.m as i32) * DIGIT_MARGIN {
            return Err(invalid(format!(
                "10^{} is not much larger than 2^{} (need a factor of {DIGIT_MARGIN})",
                self.l, self.m
            )));
        }
        for (name, v) in [
            ("theta0", self.theta0),
            ("theta1", self.theta1),
            ("alpha", self.alpha),
        ] {
            if !v.is_finite() {
                return Err(invalid(format!("{name} must be finite")));
            }
            if !angle_in_standard_range(v) {
                log::warn!("{name} = {v} lies outside (0, pi/2)");
            }
        }
        Ok(())
    }

    /// Digest length in bits.
    pub fn output_bits(&self) -> usize {
        self.n * self.m as usize
    }

    /// Digest length in bytes (`ceil(n*m / 8)`).
    pub fn output_bytes(&self) -> usize {
        self.output_bits().div_ceil(8)
    }

    pub fn with_angles(mut self, theta0: f64, theta1: f64) -> Self {
        self.theta0 = theta0;
        self.theta1 = theta1;
        self
    }

    pub fn descriptor(&self) -> ParamDescriptor {
        ParamDescriptor {
            schema_version: SCHEMA_VERSION,
            n: self.n,
            m: self.m,
            l: self.l,
            theta0: AngleValue::from_radians(self.theta0),
            theta1: AngleValue::from_radians(self.theta1),
            alpha: AngleValue::from_radians(self.alpha),
        }
    }
}

/// The two standard instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instance {
    /// 37 nodes, 296-bit digests.
    P296,
    /// 33 nodes, 264-bit digests.
    P264,
}

impl Instance {
    pub const ALL: [Instance; 2] = [Instance::P296, Instance::P264];

    pub fn name(self) -> &'static str {
        match self {
            Instance::P296 => "QHFM-P-296",
            Instance::P264 => "QHFM-P-264",
        }
    }

    pub fn params(self) -> HashParams {
        let n = match self {
            Instance::P296 => 37,
            Instance::P264 => 33,
        };
        HashParams {
            n,
            m: 8,
            l: 8,
            theta0: FRAC_PI_4,
            theta1: FRAC_PI_3,
            alpha: FRAC_PI_4,
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Instance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "QHFM-P-296" | "296" => Ok(Instance::P296),
            "QHFM-P-264" | "264" => Ok(Instance::P264),
            other => Err(invalid(format!(
                "unknown instance {other:?} (expected QHFM-P-296 or QHFM-P-264)"
            ))),
        }
    }
}

/// Parameters of a named instance.
pub fn standard_instance(name: &str) -> Result<HashParams> {
    Ok(name.parse::<Instance>()?.params())
}

/// `pi - PI`, the part of pi below `f64` resolution.
const PI_LO: f64 = 1.2246467991473532e-16;

/// `k * pi / d`, rounded from a double-`f64` intermediate so the result is
/// the nearest `f64` (`pi_fraction(1, 3) == FRAC_PI_3`). The fraction is
/// reduced first, so `15pi/60` and `pi/4` give the same value.
pub fn pi_fraction(k: u32, d: u32) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let g = k.gcd(&d);
    let (k, d) = ((k / g) as f64, (d / g) as f64);
    let hi = k * PI;
    let lo = k.mul_add(PI, -hi) + k * PI_LO;
    let q = hi / d;
    let r = (-q).mul_add(d, hi);
    q + (r + lo) / d
}

/// Parses `pi`, `pi/4`, `7pi/60`, `7*pi/60`, `2*pi` or plain decimal radians.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = t.to_ascii_lowercase();
    if let Some(idx) = lower.find("pi") {
        let (num, rest) = lower.split_at(idx);
        let num = num.strip_suffix('*').unwrap_or(num);
        let k: u32 = if num.is_empty() {
            1
        } else {
            num.parse()
                .map_err(|_| invalid(format!("bad angle multiplier in {s:?}")))?
        };
        let rest = &rest[2..];
        let d: u32 = if rest.is_empty() {
            1
        } else {
            rest.strip_prefix('/')
                .and_then(|r| r.parse().ok())
                .filter(|&d: &u32| d > 0)
                .ok_or_else(|| invalid(format!("bad angle divisor in {s:?}")))?
        };
        return Ok(pi_fraction(k, d));
    }
    let v: f64 = t
        .parse()
        .map_err(|_| invalid(format!("cannot parse angle {s:?}")))?;
    if !v.is_finite() {
        return Err(invalid(format!("angle {s:?} is not finite")));
    }
    Ok(v)
}

/// Renders `k*pi/d` when the value is exactly such a fraction (d <= 360),
/// otherwise `None`.
pub fn format_pi_fraction(v: f64) -> Option<String> {
    if v <= 0.0 || !v.is_finite() {
        return None;
    }
    for d in 1..=360u32 {
        let k = (v * d as f64 / PI).round();
        if k < 1.0 || k > 4.0 * d as f64 {
            continue;
        }
        let k = k as u32;
        if k.gcd(&d) != 1 || pi_fraction(k, d) != v {
            continue;
        }
        return Some(match (k, d) {
            (1, 1) => "pi".to_string(),
            (1, d) => format!("pi/{d}"),
            (k, 1) => format!("{k}*pi"),
            (k, d) => format!("{k}*pi/{d}"),
        });
    }
    None
}

/// An angle in a descriptor: either an exact `pi` expression or radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleValue {
    Radians(f64),
    Expr(String),
}

impl AngleValue {
    pub fn from_radians(v: f64) -> Self {
        match format_pi_fraction(v) {
            Some(s) => AngleValue::Expr(s),
            None => AngleValue::Radians(v),
        }
    }

    pub fn radians(&self) -> Result<f64> {
        match self {
            AngleValue::Radians(v) if v.is_finite() => Ok(*v),
            AngleValue::Radians(v) => Err(invalid(format!("angle {v} is not finite"))),
            AngleValue::Expr(s) => parse_angle(s),
        }
    }
}

/// Versioned, exchangeable description of a parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamDescriptor {
    pub schema_version: u32,
    pub n: usize,
    pub m: u32,
    pub l: u32,
    pub theta0: AngleValue,
    pub theta1: AngleValue,
    pub alpha: AngleValue,
}

impl ParamDescriptor {
    pub fn to_params(&self) -> Result<HashParams> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!(
                "unsupported descriptor schema_version {}",
                self.schema_version
            )));
        }
        let p = HashParams {
            n: self.n,
            m: self.m,
            l: self.l,
            theta0: self.theta0.radians()?,
            theta1: self.theta1.radians()?,
            alpha: self.alpha.radians()?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes")
    }
}
