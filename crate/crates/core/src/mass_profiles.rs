//! Dimensionless mass distributions `m(x)` with their derivatives, the
//! mapping `y = f(x) = ∫ sqrt(m) dx` and its inverse.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MassProfile {
    /// m(x) = 1.
    Uniform,
    /// m(x) = a² / (q + x²).
    Lorentzian { a: f64, q: f64 },
    /// m(x) = a² / (b + x²)².
    SquaredLorentzian { a: f64, b: f64 },
    /// m(x) = exp(-q x).
    Exponential { q: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

impl MassProfile {
    pub fn lorentzian(a: f64, q: f64) -> Result<Self> {
        positive("a", a)?;
        positive("q", q)?;
        Ok(Self::Lorentzian { a, q })
    }

    pub fn squared_lorentzian(a: f64, b: f64) -> Result<Self> {
        positive("a", a)?;
        positive("b", b)?;
        Ok(Self::SquaredLorentzian { a, b })
    }

    pub fn exponential(q: f64) -> Result<Self> {
        positive("q", q)?;
        Ok(Self::Exponential { q })
    }

    /// Re-checks the parameter invariants (useful after field-level edits).
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Uniform => Ok(()),
            Self::Lorentzian { a, q } => Self::lorentzian(a, q).map(|_| ()),
            Self::SquaredLorentzian { a, b } => Self::squared_lorentzian(a, b).map(|_| ()),
            Self::Exponential { q } => Self::exponential(q).map(|_| ()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Lorentzian { .. } => "lorentzian",
            Self::SquaredLorentzian { .. } => "squared_lorentzian",
            Self::Exponential { .. } => "exponential",
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, Self::Uniform)
    }

    /// Every profile is defined on the whole real line.
    pub fn domain(&self) -> Interval {
        Interval::REAL_LINE
    }

    /// Range of `mapping` over the domain.
    pub fn image(&self) -> Interval {
        match *self {
            Self::Uniform | Self::Lorentzian { .. } => Interval::REAL_LINE,
            Self::SquaredLorentzian { a, b } => {
                let half = a * FRAC_PI_2 / b.sqrt();
                Interval::new(-half, half)
            }
            Self::Exponential { .. } => Interval::new(f64::NEG_INFINITY, 0.0),
        }
    }

    fn check(&self, x: f64) -> Result<()> {
        if x.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(x, "mass profile"))
        }
    }

    pub fn mass(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.mass_unchecked(x))
    }

    pub fn dmass(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.dmass_unchecked(x))
    }

    pub fn d2mass(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.d2mass_unchecked(x))
    }

    pub fn mapping(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.mapping_unchecked(x))
    }

    pub fn inverse_mapping(&self, y: f64) -> Result<f64> {
        if !self.image().contains(y) {
            return Err(Error::Domain(y, "inverse mapping"));
        }
        Ok(self.inverse_unchecked(y))
    }

    pub(crate) fn mass_unchecked(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform => 1.0,
            Self::Lorentzian { a, q } => a * a / (q + x * x),
            Self::SquaredLorentzian { a, b } => {
                let u = b + x * x;
                a * a / (u * u)
            }
            Self::Exponential { q } => (-q * x).exp(),
        }
    }

    pub(crate) fn dmass_unchecked(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform => 0.0,
            Self::Lorentzian { a, q } => {
                let u = q + x * x;
                -2.0 * a * a * x / (u * u)
            }
            Self::SquaredLorentzian { a, b } => {
                let u = b + x * x;
                -4.0 * a * a * x / (u * u * u)
            }
            Self::Exponential { q } => -q * (-q * x).exp(),
        }
    }

    pub(crate) fn d2mass_unchecked(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform => 0.0,
            Self::Lorentzian { a, q } => {
                let u = q + x * x;
                a * a * (6.0 * x * x - 2.0 * q) / (u * u * u)
            }
            Self::SquaredLorentzian { a, b } => {
                let u = b + x * x;
                a * a * (20.0 * x * x - 4.0 * b) / (u * u * u * u)
            }
            Self::Exponential { q } => q * q * (-q * x).exp(),
        }
    }

    /// `m''/m - (7/4)(m'/m)²`, evaluated in closed form where the ratio
    /// would otherwise overflow (exponential profile).
    pub(crate) fn correction_bracket(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform => 0.0,
            Self::Exponential { q } => -0.75 * q * q,
            _ => {
                let m = self.mass_unchecked(x);
                let r1 = self.dmass_unchecked(x) / m;
                self.d2mass_unchecked(x) / m - 1.75 * r1 * r1
            }
        }
    }

    pub(crate) fn mapping_unchecked(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform => x,
            Self::Lorentzian { a, q } => {
                let r = (q + x * x).sqrt();
                // x + r loses all digits for large negative x
                let s = if x >= 0.0 { x + r } else { q / (r - x) };
                a * s.ln()
            }
            Self::SquaredLorentzian { a, b } => {
                let sb = b.sqrt();
                a / sb * (x / sb).atan()
            }
            Self::Exponential { q } => -2.0 / q * (-0.5 * q * x).exp(),
        }
    }

    pub(crate) fn inverse_unchecked(&self, y: f64) -> f64 {
        match *self {
            Self::Uniform => y,
            Self::Lorentzian { a, q } => {
                let t = y / a;
                0.5 * (t.exp() - q * (-t).exp())
            }
            Self::SquaredLorentzian { a, b } => {
                let sb = b.sqrt();
                sb * (sb * y / a).tan()
            }
            Self::Exponential { q } => -2.0 / q * (-0.5 * q * y).ln(),
        }
    }

    /// Inverse mapping extended to the closure of the image: image endpoints
    /// map to the corresponding infinite end of the x-axis.
    pub(crate) fn inverse_extended(&self, y: f64) -> f64 {
        let image = self.image();
        if y <= image.lo {
            f64::NEG_INFINITY
        } else if y >= image.hi {
            f64::INFINITY
        } else {
            self.inverse_unchecked(y)
        }
    }
}

impl fmt::Display for MassProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Uniform => write!(f, "uniform"),
            Self::Lorentzian { a, q } => write!(f, "lorentzian a={a} q={q}"),
            Self::SquaredLorentzian { a, b } => write!(f, "squared_lorentzian a={a} b={b}"),
            Self::Exponential { q } => write!(f, "exponential q={q}"),
        }
    }
}

/// Parses `kind key=value ...`, e.g. `lorentzian a=1.0 q=1.0`.
/// Parameters not given default to 1.
impl FromStr for MassProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let kind = tokens.next().ok_or_else(|| Error::ProfileSpec("empty specification".into()))?;
        let allowed: &[&str] = match kind {
            "uniform" => &[],
            "lorentzian" => &["a", "q"],
            "squared_lorentzian" => &["a", "b"],
            "exponential" => &["q"],
            other => return Err(Error::ProfileSpec(format!("unknown profile kind `{other}`"))),
        };
        let (mut a, mut q, mut b) = (1.0, 1.0, 1.0);
        for token in tokens {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::ProfileSpec(format!("expected key=value, got `{token}`")))?;
            if !allowed.contains(&key) {
                return Err(Error::ProfileSpec(format!("`{key}` is not a parameter of {kind}")));
            }
            let value: f64 = value
                .parse()
                .map_err(|_| Error::ProfileSpec(format!("`{value}` is not a number (key {key})")))?;
            match key {
                "a" => a = value,
                "q" => q = value,
                _ => b = value,
            }
        }
        match kind {
            "uniform" => Ok(Self::Uniform),
            "lorentzian" => Self::lorentzian(a, q),
            "squared_lorentzian" => Self::squared_lorentzian(a, b),
            _ => Self::exponential(q),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn mass_and_derivatives_at_origin() {
        let p = MassProfile::lorentzian(1.0, 1.0).unwrap();
        assert_eq!(p.mass(0.0).unwrap(), 1.0);
        assert_eq!(p.dmass(0.0).unwrap(), 0.0);
        assert_eq!(p.d2mass(0.0).unwrap(), -2.0);

        let u = MassProfile::Uniform;
        for x in [-3.0, 0.0, 7.5] {
            assert_eq!(u.mass(x).unwrap(), 1.0);
            assert_eq!(u.dmass(x).unwrap(), 0.0);
            assert_eq!(u.d2mass(x).unwrap(), 0.0);
        }

        let e = MassProfile::exponential(2.0).unwrap();
        assert_eq!(e.mass(0.0).unwrap(), 1.0);
        assert_eq!(e.dmass(0.0).unwrap(), -2.0);
        assert_eq!(e.d2mass(0.0).unwrap(), 4.0);
    }

    #[test]
    fn mapping_examples() {
        let p = MassProfile::lorentzian(1.0, 1.0).unwrap();
        assert_eq!(p.mapping(0.0).unwrap(), 0.0);
        assert_eq!(p.inverse_mapping(0.0).unwrap(), 0.0);

        let s = MassProfile::squared_lorentzian(1.0, 1.0).unwrap();
        assert!((s.mapping(1.0).unwrap() - 0.785_398_163_4).abs() < 1e-10);
        assert!((s.inverse_mapping(FRAC_PI_4).unwrap() - 1.0).abs() < 1e-12);

        let e = MassProfile::exponential(2.0).unwrap();
        assert_eq!(e.mapping(0.0).unwrap(), -1.0);
        assert_eq!(e.inverse_mapping(-1.0).unwrap(), 0.0);
    }

    #[test]
    fn out_of_range_is_rejected() {
        let e = MassProfile::exponential(2.0).unwrap();
        assert!(e.inverse_mapping(0.5).is_err());
        let s = MassProfile::squared_lorentzian(1.0, 1.0).unwrap();
        assert!(s.inverse_mapping(2.0).is_err());
        assert!(s.mass(f64::NAN).is_err());
        assert!(MassProfile::lorentzian(1.0, 0.0).is_err());
        assert!(MassProfile::squared_lorentzian(1.0, -1.0).is_err());
        assert!(MassProfile::exponential(-2.0).is_err());
    }

    #[test]
    fn parse_and_display() {
        let p: MassProfile = "lorentzian a=1.5 q=2".parse().unwrap();
        assert_eq!(p, MassProfile::Lorentzian { a: 1.5, q: 2.0 });
        assert_eq!(p.to_string().parse::<MassProfile>().unwrap(), p);
        assert_eq!("uniform".parse::<MassProfile>().unwrap(), MassProfile::Uniform);
        assert_eq!(
            "exponential".parse::<MassProfile>().unwrap(),
            MassProfile::Exponential { q: 1.0 }
        );
        assert!("squared_lorentzian q=1".parse::<MassProfile>().is_err());
        assert!("cubic a=1".parse::<MassProfile>().is_err());
        assert!("lorentzian a=x".parse::<MassProfile>().is_err());
        assert!("".parse::<MassProfile>().is_err());
    }

    #[test]
    fn image_bookkeeping() {
        let s = MassProfile::squared_lorentzian(2.0, 4.0).unwrap();
        let img = s.image();
        assert!((img.hi - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(img.lo, -img.hi);
        assert_eq!(MassProfile::exponential(1.0).unwrap().image().hi, 0.0);
        assert_eq!(MassProfile::lorentzian(1.0, 3.0).unwrap().image(), Interval::REAL_LINE);
    }
}
