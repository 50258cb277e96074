//! Curve profiles `H` and their analytic hypotheses.
//!
//! A profile describes the planar trace `x = H(y)` of a harmonic curve.  The
//! solvers only interact with profiles through:
//!
//! * the evaluators [`CurveProfile::h0`] .. [`CurveProfile::h3`] (value and
//!   first three derivatives),
//! * the quasilinear coefficient [`CurveProfile::r_coeff`],
//!   `r = H'' H' / (1 + H'^2)`,
//! * the arclength transform [`CurveProfile::arclength`] with
//!   `F'(s) = sqrt(1 + H'(s)^2)` and its inverse, and
//! * the vertical integrand weight [`CurveProfile::psi`],
//!   `psi = 2 (s H'(s) - H(s))`, which is the derivative of the potential
//!   whose gradient the vertical component integrates.
//!
//! The hypothesis side of the theory (sign and growth conditions on `H`) is
//! exposed as [`check_condition`]: each [`ConditionId`] is sampled over an
//! interval and reported as a [`ConditionVerdict`] with a signed margin, so a
//! caller can distinguish "holds with room" from "holds identically" from
//! "fails at this witness".

use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, invert_increasing};
use serde::{Deserialize, Serialize};

/// Absolute quadrature target for the arclength transform.
const ARCLENGTH_TOL: f64 = 2.5e-13;

/// Parametric families of profiles.  `Tabulated` carries user-supplied
/// derivative tables; no automatic differentiation is attempted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileKind {
    /// `H(s) = c`
    Constant { c: f64 },
    /// `H(s) = a s + b`
    Affine { a: f64, b: f64 },
    /// `H(s) = a s^2 + b s + c`
    Quadratic { a: f64, b: f64, c: f64 },
    /// `H(s) = a exp(b s) + c`
    Exp { a: f64, b: f64, c: f64 },
    /// `H(s) = a atan(b s) + c`
    Arctan { a: f64, b: f64, c: f64 },
    /// Sampled profile with derivative tables; values are interpolated by
    /// cubic Hermite pieces (each derivative table supplies the slopes of
    /// the previous one, the last one is interpolated linearly).
    Tabulated {
        s: Vec<f64>,
        h: Vec<f64>,
        h1: Vec<f64>,
        h2: Vec<f64>,
        h3: Vec<f64>,
    },
}

/// A profile together with its validity interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveProfile {
    kind: ProfileKind,
    validity: [f64; 2],
}

impl<'de> Deserialize<'de> for CurveProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let kind = ProfileKind::deserialize(d)?;
        CurveProfile::new(kind).map_err(serde::de::Error::custom)
    }
}

impl CurveProfile {
    pub fn new(kind: ProfileKind) -> Result<Self> {
        let validity = match &kind {
            ProfileKind::Tabulated { s, h, h1, h2, h3 } => {
                if s.len() < 2 {
                    return Err(Error::InvalidArgument(
                        "tabulated profile needs at least two samples".into(),
                    ));
                }
                if [h.len(), h1.len(), h2.len(), h3.len()]
                    .iter()
                    .any(|l| *l != s.len())
                {
                    return Err(Error::DimensionMismatch(
                        "tabulated profile columns must have equal length".into(),
                    ));
                }
                if s.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::InvalidArgument(
                        "tabulated abscissae must be strictly increasing".into(),
                    ));
                }
                let finite = s
                    .iter()
                    .chain(h)
                    .chain(h1)
                    .chain(h2)
                    .chain(h3)
                    .all(|v| v.is_finite());
                if !finite {
                    return Err(Error::InvalidArgument(
                        "tabulated profile entries must be finite".into(),
                    ));
                }
                [s[0], s[s.len() - 1]]
            }
            ProfileKind::Constant { c } => {
                require_finite(&[*c])?;
                [f64::NEG_INFINITY, f64::INFINITY]
            }
            ProfileKind::Affine { a, b } => {
                require_finite(&[*a, *b])?;
                [f64::NEG_INFINITY, f64::INFINITY]
            }
            ProfileKind::Quadratic { a, b, c }
            | ProfileKind::Exp { a, b, c }
            | ProfileKind::Arctan { a, b, c } => {
                require_finite(&[*a, *b, *c])?;
                [f64::NEG_INFINITY, f64::INFINITY]
            }
        };
        Ok(CurveProfile { kind, validity })
    }

    pub fn constant(c: f64) -> Self {
        Self::new(ProfileKind::Constant { c }).expect("finite")
    }

    pub fn affine(a: f64, b: f64) -> Self {
        Self::new(ProfileKind::Affine { a, b }).expect("finite")
    }

    pub fn quadratic(a: f64, b: f64, c: f64) -> Self {
        Self::new(ProfileKind::Quadratic { a, b, c }).expect("finite")
    }

    pub fn exp(a: f64, b: f64, c: f64) -> Self {
        Self::new(ProfileKind::Exp { a, b, c }).expect("finite")
    }

    pub fn arctan(a: f64, b: f64, c: f64) -> Self {
        Self::new(ProfileKind::Arctan { a, b, c }).expect("finite")
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    /// Validity interval `[lo, hi]` (infinite for the closed-form kinds).
    pub fn validity(&self) -> [f64; 2] {
        self.validity
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.validity[0] && s <= self.validity[1]
    }

    pub fn check_range(&self, lo: f64, hi: f64) -> Result<()> {
        if !self.contains(lo) || !self.contains(hi) {
            let s = if self.contains(lo) { hi } else { lo };
            return Err(Error::ProfileRange {
                s,
                lo: self.validity[0],
                hi: self.validity[1],
            });
        }
        Ok(())
    }

    /// `H(s)`
    pub fn h0(&self, s: f64) -> f64 {
        match &self.kind {
            ProfileKind::Constant { c } => *c,
            ProfileKind::Affine { a, b } => a * s + b,
            ProfileKind::Quadratic { a, b, c } => (a * s + b) * s + c,
            ProfileKind::Exp { a, b, c } => a * (b * s).exp() + c,
            ProfileKind::Arctan { a, b, c } => a * (b * s).atan() + c,
            ProfileKind::Tabulated { s: xs, h, h1, .. } => hermite(xs, h, h1, s),
        }
    }

    /// `H'(s)`
    pub fn h1(&self, s: f64) -> f64 {
        match &self.kind {
            ProfileKind::Constant { .. } => 0.0,
            ProfileKind::Affine { a, .. } => *a,
            ProfileKind::Quadratic { a, b, .. } => 2.0 * a * s + b,
            ProfileKind::Exp { a, b, .. } => a * b * (b * s).exp(),
            ProfileKind::Arctan { a, b, .. } => a * b / (1.0 + b * b * s * s),
            ProfileKind::Tabulated { s: xs, h1, h2, .. } => hermite(xs, h1, h2, s),
        }
    }

    /// `H''(s)`
    pub fn h2(&self, s: f64) -> f64 {
        match &self.kind {
            ProfileKind::Constant { .. } | ProfileKind::Affine { .. } => 0.0,
            ProfileKind::Quadratic { a, .. } => 2.0 * a,
            ProfileKind::Exp { a, b, .. } => a * b * b * (b * s).exp(),
            ProfileKind::Arctan { a, b, .. } => {
                let w = 1.0 + b * b * s * s;
                -2.0 * a * b.powi(3) * s / (w * w)
            }
            ProfileKind::Tabulated { s: xs, h2, h3, .. } => hermite(xs, h2, h3, s),
        }
    }

    /// `H'''(s)`
    pub fn h3(&self, s: f64) -> f64 {
        match &self.kind {
            ProfileKind::Constant { .. }
            | ProfileKind::Affine { .. }
            | ProfileKind::Quadratic { .. } => 0.0,
            ProfileKind::Exp { a, b, .. } => a * b.powi(3) * (b * s).exp(),
            ProfileKind::Arctan { a, b, .. } => {
                let w = 1.0 + b * b * s * s;
                -2.0 * a * b.powi(3) * (1.0 - 3.0 * b * b * s * s) / (w * w * w)
            }
            ProfileKind::Tabulated { s: xs, h3, .. } => linear(xs, h3, s),
        }
    }

    /// Quasilinear coefficient `r(s) = H''(s) H'(s) / (1 + H'(s)^2)`.
    pub fn r_coeff(&self, s: f64) -> Result<f64> {
        if !self.contains(s) {
            return Err(Error::ProfileRange {
                s,
                lo: self.validity[0],
                hi: self.validity[1],
            });
        }
        Ok(self.r_unchecked(s))
    }

    pub(crate) fn r_unchecked(&self, s: f64) -> f64 {
        let d1 = self.h1(s);
        self.h2(s) * d1 / (1.0 + d1 * d1)
    }

    /// Arclength derivative `F'(s) = sqrt(1 + H'(s)^2) >= 1`.
    pub fn arclength_deriv(&self, s: f64) -> f64 {
        let d1 = self.h1(s);
        (1.0 + d1 * d1).sqrt()
    }

    /// True when `H'' == 0` identically, i.e. the arclength transform is
    /// linear and evaluated in closed form.
    fn linear_arclength_slope(&self) -> Option<f64> {
        match &self.kind {
            ProfileKind::Constant { .. } => Some(1.0),
            ProfileKind::Affine { a, .. } => Some((1.0 + a * a).sqrt()),
            _ => None,
        }
    }

    /// Arclength transform `F(s) = int_{s0}^{s} sqrt(1 + H'(u)^2) du`.
    ///
    /// Strictly increasing in `s`; evaluated in closed form for profiles with
    /// `H'' == 0` and by adaptive quadrature (absolute error below 1e-12)
    /// otherwise.
    pub fn arclength(&self, s: f64, s0: f64) -> Result<f64> {
        self.check_range(s.min(s0), s.max(s0))?;
        if let Some(slope) = self.linear_arclength_slope() {
            return Ok(slope * (s - s0));
        }
        Ok(adaptive_simpson(
            &|u| self.arclength_deriv(u),
            s0,
            s,
            ARCLENGTH_TOL,
        ))
    }

    /// Inverse of the arclength transform: the `s` with `F(s) = v`.
    ///
    /// Errors when `v` is not reachable within the validity interval.  The
    /// round trip `F(F^{-1}(v))` matches `v` to well below 1e-10.
    pub fn arclength_inv(&self, v: f64, s0: f64) -> Result<f64> {
        if !self.contains(s0) {
            return Err(Error::ProfileRange {
                s: s0,
                lo: self.validity[0],
                hi: self.validity[1],
            });
        }
        if let Some(slope) = self.linear_arclength_slope() {
            return Ok(s0 + v / slope);
        }
        let tol = 1e-13 * (1.0 + v.abs());
        // Expand a bracket around s0; F' >= 1 keeps the number of doublings
        // at most logarithmic in |v|.
        let (mut lo, mut hi);
        if v >= 0.0 {
            lo = s0;
            hi = s0;
            let mut step = 1.0_f64.min(0.25 * (self.validity[1] - s0).max(1e-3));
            loop {
                hi = (hi + step).min(self.validity[1]);
                if self.arclength(hi, s0)? >= v {
                    break;
                }
                if hi >= self.validity[1] {
                    return Err(Error::ArclengthRange { v });
                }
                step *= 2.0;
            }
        } else {
            hi = s0;
            lo = s0;
            let mut step = 1.0_f64.min(0.25 * (s0 - self.validity[0]).max(1e-3));
            loop {
                lo = (lo - step).max(self.validity[0]);
                if self.arclength(lo, s0)? <= v {
                    break;
                }
                if lo <= self.validity[0] {
                    return Err(Error::ArclengthRange { v });
                }
                step *= 2.0;
            }
        }
        invert_increasing(
            &|s| self.arclength(s, s0).unwrap_or(f64::INFINITY),
            &|s| self.arclength_deriv(s),
            v,
            lo,
            hi,
            tol,
        )
    }

    /// Vertical integrand weight `psi(s) = 2 (s H'(s) - H(s))`: the vertical
    /// component of a harmonic curve satisfies `grad t = psi(y) grad y`.
    pub fn psi(&self, s: f64) -> f64 {
        2.0 * (s * self.h1(s) - self.h0(s))
    }

    /// Short human-readable description used in reports.
    pub fn describe(&self) -> String {
        match &self.kind {
            ProfileKind::Constant { c } => format!("constant({c})"),
            ProfileKind::Affine { a, b } => format!("affine({a}, {b})"),
            ProfileKind::Quadratic { a, b, c } => format!("quadratic({a}, {b}, {c})"),
            ProfileKind::Exp { a, b, c } => format!("exp({a}, {b}, {c})"),
            ProfileKind::Arctan { a, b, c } => format!("arctan({a}, {b}, {c})"),
            ProfileKind::Tabulated { s, .. } => format!("tabulated({} samples)", s.len()),
        }
    }
}

fn require_finite(vals: &[f64]) -> Result<()> {
    if vals.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "profile parameters must be finite".into(),
        ))
    }
}

fn locate(xs: &[f64], s: f64) -> usize {
    // clamped interval index for piecewise evaluation
    match xs.binary_search_by(|x| x.partial_cmp(&s).unwrap()) {
        Ok(i) => i.min(xs.len() - 2),
        Err(0) => 0,
        Err(i) => (i - 1).min(xs.len() - 2),
    }
}

fn hermite(xs: &[f64], ys: &[f64], ds: &[f64], s: f64) -> f64 {
    let i = locate(xs, s);
    let w = xs[i + 1] - xs[i];
    let u = (s - xs[i]) / w;
    let (u2, u3) = (u * u, u * u * u);
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    h00 * ys[i] + h10 * w * ds[i] + h01 * ys[i + 1] + h11 * w * ds[i + 1]
}

fn linear(xs: &[f64], ys: &[f64], s: f64) -> f64 {
    let i = locate(xs, s);
    let u = (s - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] * (1.0 - u) + ys[i + 1] * u
}

// ---------------------------------------------------------------------------
// Hypothesis conditions
// ---------------------------------------------------------------------------

/// Identifiers of the analytic hypotheses carried by a profile.
///
/// Each condition is an inequality in `s` sampled over an interval; `margin`
/// is the worst signed slack (nonnegative iff the condition holds at every
/// sample; strict conditions additionally require a positive margin).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionId {
    /// `mu = sup |r(s) s| < 1` (strict).
    #[serde(rename = "CACCIOPPOLI_MU")]
    CaccioppoliMu,
    /// `H''(s) (H(s) - s H'(s)) >= 0`.
    #[serde(rename = "SUPERHARM")]
    Superharm,
    /// `H''(s) (H(s) - s H'(s)) <= 0` (supersolution side of the moduli
    /// comparison).
    #[serde(rename = "SUPERHARM_REVERSED")]
    SuperharmReversed,
    /// `H''' H' (1 + H'^2) + H''^2 (1 - H'^2) <= 0`.
    #[serde(rename = "COMPARISON_Y")]
    ComparisonY,
    /// `H'''(s + H H')(1 + H'^2) + H''^2 (1 - H'^2) + H''(1 + H'^2 - 2 s H') <= 0`.
    #[serde(rename = "COMPARISON_T")]
    ComparisonT,
    /// `sup |r(s)| < C` for a caller-supplied `C` (strict).
    #[serde(rename = "STRONG_MAX")]
    StrongMax,
    /// `H'(s) H''(s) <= 0`.
    #[serde(rename = "SIGN_HpHpp")]
    SignHpHpp,
    /// `H''(s) >= 0`.
    #[serde(rename = "SIGN_Hpp_NONNEG")]
    SignHppNonneg,
    /// `H'(s) <= 0`.
    #[serde(rename = "SIGN_Hp_NONPOS")]
    SignHpNonpos,
    /// `(s + H(s) H'(s)) H''(s) >= 0`.
    #[serde(rename = "THREE_SPHERES_T")]
    ThreeSpheresT,
    /// Parameter check of the admissible quadratic family.
    #[serde(rename = "QUADRATIC_EXAMPLE")]
    QuadraticExample,
}

impl ConditionId {
    /// All samplable conditions (excludes the quadratic parameter check).
    pub const SAMPLED: [ConditionId; 10] = [
        ConditionId::CaccioppoliMu,
        ConditionId::Superharm,
        ConditionId::SuperharmReversed,
        ConditionId::ComparisonY,
        ConditionId::ComparisonT,
        ConditionId::StrongMax,
        ConditionId::SignHpHpp,
        ConditionId::SignHppNonneg,
        ConditionId::SignHpNonpos,
        ConditionId::ThreeSpheresT,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionId::CaccioppoliMu => "CACCIOPPOLI_MU",
            ConditionId::Superharm => "SUPERHARM",
            ConditionId::SuperharmReversed => "SUPERHARM_REVERSED",
            ConditionId::ComparisonY => "COMPARISON_Y",
            ConditionId::ComparisonT => "COMPARISON_T",
            ConditionId::StrongMax => "STRONG_MAX",
            ConditionId::SignHpHpp => "SIGN_HpHpp",
            ConditionId::SignHppNonneg => "SIGN_Hpp_NONNEG",
            ConditionId::SignHpNonpos => "SIGN_Hp_NONPOS",
            ConditionId::ThreeSpheresT => "THREE_SPHERES_T",
            ConditionId::QuadraticExample => "QUADRATIC_EXAMPLE",
        }
    }

    fn is_strict(&self) -> bool {
        matches!(self, ConditionId::CaccioppoliMu | ConditionId::StrongMax)
    }
}

/// Outcome of sampling one condition over an interval.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub condition_id: ConditionId,
    pub holds: bool,
    /// Worst signed slack over the samples; nonnegative iff the inequality
    /// holds everywhere (strictly positive for the strict conditions).
    pub margin: f64,
    /// Sample point attaining the worst slack (constraint index for the
    /// quadratic parameter check).
    pub witness: f64,
    pub samples: usize,
}

/// Samples `id` on `[range.0, range.1]` at `samples` uniformly spaced points
/// (endpoints included).  `STRONG_MAX` needs a threshold; use
/// [`check_condition_with_threshold`].
pub fn check_condition(
    prof: &CurveProfile,
    id: ConditionId,
    range: (f64, f64),
    samples: usize,
) -> Result<ConditionVerdict> {
    if id == ConditionId::StrongMax {
        return Err(Error::MissingParameter(
            "STRONG_MAX requires a threshold; call check_condition_with_threshold",
        ));
    }
    check_condition_with_threshold(prof, id, range, samples, f64::NAN)
}

/// As [`check_condition`], with the strict bound `C` used by `STRONG_MAX`.
pub fn check_condition_with_threshold(
    prof: &CurveProfile,
    id: ConditionId,
    range: (f64, f64),
    samples: usize,
    c: f64,
) -> Result<ConditionVerdict> {
    let (lo, hi) = range;
    if !(hi >= lo) {
        return Err(Error::InvalidArgument(format!(
            "condition range [{lo}, {hi}] is empty"
        )));
    }
    if samples < 2 && hi > lo {
        return Err(Error::InvalidArgument(
            "need at least two samples on a nondegenerate range".into(),
        ));
    }
    prof.check_range(lo, hi)?;
    if id == ConditionId::StrongMax && !(c > 0.0) {
        return Err(Error::MissingParameter("STRONG_MAX threshold C must be positive"));
    }
    if id == ConditionId::QuadraticExample {
        return Err(Error::InvalidArgument(
            "QUADRATIC_EXAMPLE is a parameter check; call check_quadratic_example".into(),
        ));
    }

    let n = if hi > lo { samples } else { 1 };
    let mut margin = f64::INFINITY;
    let mut witness = lo;
    for k in 0..n {
        let s = if n == 1 {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (n - 1) as f64
        };
        let slack = condition_slack(prof, id, s, c);
        if slack < margin {
            margin = slack;
            witness = s;
        }
    }
    let holds = if id.is_strict() { margin > 0.0 } else { margin >= 0.0 };
    Ok(ConditionVerdict {
        condition_id: id,
        holds,
        margin,
        witness,
        samples: n,
    })
}

/// Signed slack of one condition at one sample (nonnegative = satisfied).
fn condition_slack(prof: &CurveProfile, id: ConditionId, s: f64, c: f64) -> f64 {
    let h0 = prof.h0(s);
    let h1 = prof.h1(s);
    let h2 = prof.h2(s);
    let h3 = prof.h3(s);
    let g = 1.0 + h1 * h1;
    let r = h2 * h1 / g;
    match id {
        ConditionId::CaccioppoliMu => 1.0 - (r * s).abs(),
        ConditionId::Superharm => h2 * (h0 - s * h1),
        ConditionId::SuperharmReversed => -(h2 * (h0 - s * h1)),
        ConditionId::ComparisonY => -(h3 * h1 * g + h2 * h2 * (1.0 - h1 * h1)),
        ConditionId::ComparisonT => {
            -(h3 * (s + h0 * h1) * g + h2 * h2 * (1.0 - h1 * h1) + h2 * (g - 2.0 * s * h1))
        }
        ConditionId::StrongMax => c - r.abs(),
        ConditionId::SignHpHpp => -(h1 * h2),
        ConditionId::SignHppNonneg => h2,
        ConditionId::SignHpNonpos => -h1,
        ConditionId::ThreeSpheresT => (s + h0 * h1) * h2,
        ConditionId::QuadraticExample => f64::NAN,
    }
}

/// Parameter check for the admissible quadratic family `H = a s^2 + b s + c`:
/// `a <= 0`, `b^2 <= 4 a (a - 1)` and `b <= -1 - 2 a * inf_bound`, where
/// `inf_bound` is a lower bound for the data the profile is applied to.  The
/// offset `c` does not enter any constraint.  The witness is the index of the
/// binding constraint.
pub fn check_quadratic_example(a: f64, b: f64, c: f64, inf_bound: f64) -> Result<ConditionVerdict> {
    require_finite(&[a, b, c, inf_bound])?;
    let slacks = [
        -a,
        4.0 * a * (a - 1.0) - b * b,
        (-1.0 - 2.0 * a * inf_bound) - b,
    ];
    let (idx, margin) = slacks
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.partial_cmp(y.1).unwrap())
        .map(|(i, m)| (i, *m))
        .unwrap();
    Ok(ConditionVerdict {
        condition_id: ConditionId::QuadraticExample,
        holds: margin >= 0.0,
        margin,
        witness: idx as f64,
        samples: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::observed_order;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn catalog() -> Vec<CurveProfile> {
        vec![
            CurveProfile::constant(2.0),
            CurveProfile::affine(1.5, -0.5),
            CurveProfile::quadratic(-1.0, -2.0, 5.0),
            CurveProfile::quadratic(1.0, 0.0, 0.0),
            CurveProfile::exp(1.0, -1.0, 0.0),
            CurveProfile::arctan(0.8, 2.0, -0.3),
        ]
    }

    #[test]
    fn r_coeff_examples() {
        let sq = CurveProfile::quadratic(1.0, 0.0, 0.0);
        assert_relative_eq!(sq.r_coeff(0.5).unwrap(), 1.0, epsilon = 1e-15);
        let aff = CurveProfile::affine(3.0, 1.0);
        assert_eq!(aff.r_coeff(7.0).unwrap(), 0.0);
    }

    #[test]
    fn r_coeff_respects_validity() {
        let tab = CurveProfile::new(ProfileKind::Tabulated {
            s: vec![0.0, 1.0],
            h: vec![0.0, 1.0],
            h1: vec![1.0, 1.0],
            h2: vec![0.0, 0.0],
            h3: vec![0.0, 0.0],
        })
        .unwrap();
        assert!(tab.r_coeff(0.5).is_ok());
        assert!(matches!(
            tab.r_coeff(2.0),
            Err(Error::ProfileRange { .. })
        ));
    }

    #[test]
    fn derivative_chain_converges_at_second_order() {
        // central differences of each evaluator against the next one
        for prof in catalog() {
            let strides = [1e-3, 1e-4];
            let pts = [-0.7, 0.11, 0.9];
            for (eval, deriv) in [
                (&|s: f64| prof.h0(s) as f64, &|s: f64| prof.h1(s)) as (&dyn Fn(f64) -> f64, &dyn Fn(f64) -> f64),
                (&|s: f64| prof.h1(s), &|s: f64| prof.h2(s)),
                (&|s: f64| prof.h2(s), &|s: f64| prof.h3(s)),
            ] {
                let errs: Vec<f64> = strides
                    .iter()
                    .map(|h| {
                        pts.iter()
                            .map(|s| {
                                let fd = (eval(s + h) - eval(s - h)) / (2.0 * h);
                                (fd - deriv(*s)).abs()
                            })
                            .fold(0.0, f64::max)
                    })
                    .collect();
                if errs[0] > 1e-12 {
                    let order = observed_order(&strides, &errs);
                    assert!(order >= 1.9, "profile {} order {order}", prof.describe());
                }
            }
        }
    }

    #[test]
    fn arclength_closed_forms() {
        let con = CurveProfile::constant(4.0);
        assert_eq!(con.arclength(0.7, 0.0).unwrap(), 0.7);
        let aff = CurveProfile::affine(1.0, 3.0);
        assert_relative_eq!(
            aff.arclength(2.0, 0.0).unwrap(),
            2.0 * 2.0_f64.sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn arclength_quadrature_matches_analytic_antiderivative() {
        // For H = a s^2 + b s + c the arclength is
        //   (u sqrt(1+u^2) + asinh u) / (4a),  u = 2 a s + b.
        let (a, b) = (-1.0, -2.0);
        let prof = CurveProfile::quadratic(a, b, 5.0);
        let anti = |s: f64| {
            let u = 2.0 * a * s + b;
            (u * (1.0 + u * u).sqrt() + u.asinh()) / (4.0 * a)
        };
        for (s0, s) in [(0.0, 0.5), (-1.0, 2.0), (0.3, 0.3), (1.0, -1.0)] {
            let v = prof.arclength(s, s0).unwrap();
            assert_relative_eq!(v, anti(s) - anti(s0), epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn arclength_is_monotone_and_invertible() {
        for prof in catalog() {
            let s0 = 0.25;
            let mut prev = f64::NEG_INFINITY;
            for k in 0..21 {
                let s = -1.5 + 3.0 * k as f64 / 20.0;
                let v = prof.arclength(s, s0).unwrap();
                assert!(v > prev, "monotone failure for {}", prof.describe());
                prev = v;
                let back = prof.arclength_inv(v, s0).unwrap();
                let roundtrip = prof.arclength(back, s0).unwrap();
                assert!(
                    (roundtrip - v).abs() <= 1e-10 * (1.0 + v.abs()),
                    "roundtrip {} for {}",
                    (roundtrip - v).abs(),
                    prof.describe()
                );
            }
        }
    }

    #[test]
    fn arclength_inv_out_of_range_for_tabulated() {
        let tab = CurveProfile::new(ProfileKind::Tabulated {
            s: vec![0.0, 1.0],
            h: vec![0.0, 0.0],
            h1: vec![0.0, 0.0],
            h2: vec![0.0, 0.0],
            h3: vec![0.0, 0.0],
        })
        .unwrap();
        // reachable range from s0 = 0 is roughly [0, ~1]
        assert!(tab.arclength_inv(5.0, 0.0).is_err());
        assert!(tab.arclength_inv(-0.5, 0.0).is_err());
    }

    #[test]
    fn caccioppoli_mu_example() {
        let prof = CurveProfile::quadratic(1.0, 0.0, 0.0);
        let verdict =
            check_condition(&prof, ConditionId::CaccioppoliMu, (-0.1, 0.1), 2001).unwrap();
        let mu = 0.04 / 1.04;
        assert!(verdict.holds);
        assert_relative_eq!(verdict.margin, 1.0 - mu, epsilon = 1e-12);
        assert_relative_eq!(verdict.witness.abs(), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn sign_condition_witness() {
        let prof = CurveProfile::quadratic(1.0, 0.0, 0.0);
        let verdict = check_condition(&prof, ConditionId::SignHpHpp, (0.0, 1.0), 101).unwrap();
        assert!(!verdict.holds);
        assert_relative_eq!(verdict.margin, -4.0, epsilon = 1e-12);
        assert_relative_eq!(verdict.witness, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn affine_profiles_sit_on_margin_zero() {
        let prof = CurveProfile::affine(2.0, -1.0);
        for id in [
            ConditionId::Superharm,
            ConditionId::SuperharmReversed,
            ConditionId::ComparisonY,
            ConditionId::ComparisonT,
            ConditionId::SignHpHpp,
        ] {
            let v = check_condition(&prof, id, (-1.0, 1.0), 101).unwrap();
            assert!(v.holds, "{id:?}");
            assert_eq!(v.margin, 0.0, "{id:?}");
        }
    }

    #[test]
    fn exp_profile_satisfies_superharmonicity_package() {
        // H = e^{-s}: nonnegative, decreasing, convex on [1, 2]
        let prof = CurveProfile::exp(1.0, -1.0, 0.0);
        for id in [
            ConditionId::Superharm,
            ConditionId::SignHpHpp,
            ConditionId::SignHppNonneg,
            ConditionId::SignHpNonpos,
            ConditionId::ThreeSpheresT,
        ] {
            let v = check_condition(&prof, id, (1.0, 2.0), 501).unwrap();
            assert!(v.holds, "{id:?} margin {}", v.margin);
        }
    }

    #[test]
    fn strong_max_requires_threshold() {
        let prof = CurveProfile::quadratic(1.0, 0.0, 0.0);
        assert!(check_condition(&prof, ConditionId::StrongMax, (0.0, 1.0), 11).is_err());
        let v = check_condition_with_threshold(&prof, ConditionId::StrongMax, (0.0, 1.0), 1001, 1.5)
            .unwrap();
        // sup |r| = sup 4s/(1+4s^2) = 1 at s = 1/2
        assert!(v.holds);
        assert_relative_eq!(v.margin, 0.5, epsilon = 1e-6);
        assert_relative_eq!(v.witness, 0.5, epsilon = 1e-3);
    }

    #[test]
    fn quadratic_example_cases() {
        // b^2 <= 4a(a-1) fails
        let v = check_quadratic_example(0.0, -1.0, 0.0, 0.0).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, 1.0);
        // slope constraint fails: b = 0 > -1
        let v = check_quadratic_example(-1.0, 0.0, 0.0, 0.0).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, 2.0);
        // admissible member
        let v = check_quadratic_example(-1.0, -2.0, 5.0, 0.0).unwrap();
        assert!(v.holds);
        assert_relative_eq!(v.margin, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn profile_json_round_trip() {
        let json = r#"{"kind":"quadratic","a":-1,"b":-2,"c":5}"#;
        let prof: CurveProfile = serde_json::from_str(json).unwrap();
        assert_eq!(prof, CurveProfile::quadratic(-1.0, -2.0, 5.0));
        let bad = r#"{"kind":"quadratic","a":-1,"b":-2,"c":5,"d":1}"#;
        assert!(serde_json::from_str::<CurveProfile>(bad).is_err());
    }

    proptest! {
        #[test]
        fn psi_is_derivative_of_vertical_potential(s in -1.0f64..1.0) {
            // psi = d/ds [2 s H - 4 int H] for a smooth profile
            let prof = CurveProfile::quadratic(0.5, -1.0, 2.0);
            let h = 1e-5;
            let pot = |u: f64| {
                2.0 * u * prof.h0(u)
                    - 4.0 * adaptive_simpson(&|w| prof.h0(w), 0.0, u, 1e-14)
            };
            let fd = (pot(s + h) - pot(s - h)) / (2.0 * h);
            prop_assert!((fd - prof.psi(s)).abs() < 1e-8);
        }
    }
}
