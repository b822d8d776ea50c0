use serde::Serialize;
use serde_json::json;

use super::Verdict;
use crate::{Error, Result};

/// The three terms of the homotopy radius bound and their minimum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiusTerms {
    pub curvature_term: f64,
    pub injectivity_term: f64,
    pub bottleneck_term: f64,
    pub radius: f64,
}

impl RadiusTerms {
    fn new(curvature_term: f64, c: f64, l_prime_c: f64) -> Self {
        let injectivity_term = c.sqrt() * std::f64::consts::FRAC_PI_2;
        Self {
            curvature_term,
            injectivity_term,
            bottleneck_term: l_prime_c,
            radius: curvature_term.min(injectivity_term).min(l_prime_c),
        }
    }
}

/// Radius below which the Čech complex of the lifted manifold recovers it.
/// The curvature term appears with `‖II_c‖₂` under the root in the
/// statement and with `‖II_c‖₂²` in the argument; both readings are kept.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HomotopyBound {
    pub c: f64,
    pub ii_c_norm: f64,
    pub l_prime_c: f64,
    /// `√(c/2) arctan √(2 / (c ‖II_c‖₂))`.
    pub statement: RadiusTerms,
    /// `√(c/2) arctan √(2 / (c ‖II_c‖₂²))`.
    pub proof: RadiusTerms,
    /// `statement.radius − proof.radius`.
    pub discrepancy: f64,
}

pub fn homotopy_radius_bound(c: f64, ii_c_norm: f64, l_prime_c: f64) -> Result<HomotopyBound> {
    if !(c > 0.0 && ii_c_norm > 0.0 && l_prime_c > 0.0) || !(c * ii_c_norm * l_prime_c).is_finite() {
        return Err(Error::Parameter(format!(
            "radius bound needs positive finite inputs, got c = {c}, ‖II_c‖ = {ii_c_norm}, L' = {l_prime_c}"
        )));
    }
    let head = (c / 2.0).sqrt();
    let statement = RadiusTerms::new(head * (2.0 / (c * ii_c_norm)).sqrt().atan(), c, l_prime_c);
    let proof = RadiusTerms::new(head * (2.0 / (c * ii_c_norm * ii_c_norm)).sqrt().atan(), c, l_prime_c);
    Ok(HomotopyBound {
        c,
        ii_c_norm,
        l_prime_c,
        statement,
        proof,
        discrepancy: statement.radius - proof.radius,
    })
}

impl HomotopyBound {
    /// A calculator, not an inequality: the verdict records both radii and
    /// passes when they are positive.
    pub fn verdict(&self) -> Verdict {
        let pass = self.statement.radius > 0.0 && self.proof.radius > 0.0;
        Verdict::new(
            "homotopy_radius_bound",
            json!({"c": self.c, "ii_c_norm": self.ii_c_norm, "l_prime_c": self.l_prime_c}),
            self.statement.radius,
            self.proof.radius,
            self.statement.radius.min(self.proof.radius),
            pass,
        )
        .with_note(format!(
            "statement variant minus proof variant = {:.6e}",
            self.discrepancy
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn unit_norm_example() {
        let b = homotopy_radius_bound(2.0, 1.0, 10.0).unwrap();
        assert!((b.proof.curvature_term - FRAC_PI_4).abs() < 1e-15);
        assert!((b.proof.injectivity_term - 2f64.sqrt() * FRAC_PI_2).abs() < 1e-15);
        assert!((b.proof.radius - FRAC_PI_4).abs() < 1e-15);
        // the two readings coincide at ‖II_c‖ = 1
        assert_eq!(b.discrepancy, 0.0);
    }

    #[test]
    fn smallest_term_wins() {
        let b = homotopy_radius_bound(2.0, 1.0, 0.1).unwrap();
        assert_eq!(b.proof.radius, 0.1);
        assert_eq!(b.statement.radius, 0.1);
    }

    #[test]
    fn curvature_term_tends_to_inverse_norm_for_large_c() {
        // √(c/2) arctan √(2/(c a²)) → 1/a, increasing toward it
        let a = 3.0;
        let mut last = 0.0;
        for c in [1e-2, 1.0, 1e2, 1e4, 1e6] {
            let b = homotopy_radius_bound(c, a, 1e9).unwrap();
            assert!(b.proof.curvature_term > last);
            assert!(b.proof.curvature_term < 1.0 / a);
            last = b.proof.curvature_term;
        }
        assert!((last - 1.0 / a).abs() < 1e-6);
    }

    #[test]
    fn variants_differ_away_from_unit_norm() {
        let b = homotopy_radius_bound(0.5, 4.0, 10.0).unwrap();
        // √(2/(c a)) > √(2/(c a²)) for a > 1
        assert!(b.statement.curvature_term > b.proof.curvature_term);
        assert!(b.discrepancy > 0.0);
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        assert!(homotopy_radius_bound(0.0, 1.0, 1.0).is_err());
        assert!(homotopy_radius_bound(1.0, -1.0, 1.0).is_err());
        assert!(homotopy_radius_bound(1.0, 1.0, 0.0).is_err());
    }
}
