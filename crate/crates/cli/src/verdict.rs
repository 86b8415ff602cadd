//! Admissibility verdicts for the `check-admissible` subcommand.
//!
//! Polynomial families get the exact theorems where they exist (degree two,
//! sum type; the product family, max type) and the sufficient condition for
//! degree three. Table scalings get bounded refutation scans: a violation is
//! a hard "no", a clean scan is reported as inconclusive.

use admiss_hc_core::scaling::{
    admissible_max_deg2, admissible_sum_deg2, functional_identity_witness, monotone_violation,
    superadditive_violation, Scaling,
};
use admiss_hc_core::{ObjectiveKind, Rat, RatObjective, Scalar};
use serde_json::json;

pub struct Verdict {
    /// True when no obstruction to admissibility was found.
    pub admissible: bool,
    /// True when the verdict is proven: an exact characterization either
    /// way, a satisfied sufficient condition, or an explicit violation of a
    /// necessary condition. False when a bounded search merely found
    /// nothing, or a sufficient test failed without a refutation.
    pub conclusive: bool,
    pub reason: String,
    pub witness: Option<serde_json::Value>,
}

pub fn check(spec: &RatObjective, bound: usize) -> Verdict {
    match (&spec.scaling, spec.kind) {
        (Scaling::Sum(s), ObjectiveKind::Sum) => {
            sum_family_verdict(&s.lambda, &s.mu, &s.nu, &spec.scaling, bound)
        }
        (Scaling::Poly(p), ObjectiveKind::Sum) => match p.canonicalize() {
            Some(s) => sum_family_verdict(&s.lambda, &s.mu, &s.nu, &spec.scaling, bound),
            None => Verdict {
                admissible: false,
                conclusive: true,
                reason: "objective is not constant on uniform instances (the coefficients \
                         do not satisfy lambda1 = -lambda2 and mu1 = -2 mu2)"
                    .into(),
                witness: Some(json!({
                    "condition": "uniform-similarity constancy",
                    "lambda1_plus_lambda2": (p.lambda1.clone() + p.lambda2.clone()).to_string(),
                    "mu1_plus_2mu2": (p.mu1.clone() + Rat::from_ratio(2, 1) * p.mu2.clone()).to_string(),
                })),
            },
        },
        (Scaling::Max(m), ObjectiveKind::Max) => {
            let ok = admissible_max_deg2(&m.lambda);
            Verdict {
                admissible: ok,
                conclusive: true,
                reason: if ok {
                    format!("lambda = {} > 0", m.lambda)
                } else {
                    format!("lambda = {} is not positive", m.lambda)
                },
                witness: (!ok).then(|| json!({"condition": "lambda > 0", "lambda": m.lambda.to_string()})),
            }
        }
        (scaling, kind) => scan_verdict(scaling, kind, bound),
    }
}

fn sum_family_verdict(
    lambda: &Rat,
    mu: &Rat,
    nu: &Rat,
    scaling: &Scaling<Rat>,
    bound: usize,
) -> Verdict {
    let zero = Rat::from_ratio(0, 1);
    if *lambda == zero {
        // degree at most two: the characterization is exact, with the
        // quadratic family's coefficients sitting in the (mu, nu) slots
        let ok = admissible_sum_deg2(mu, nu);
        let witness = (!ok).then(|| {
            let violation = monotone_violation(scaling, bound);
            json!({
                "condition": "lambda >= 0 and 9*lambda + mu > 0 (degree-2 coefficients)",
                "nine_lambda_plus_mu": (Rat::from_ratio(9, 1) * mu.clone() + nu.clone()).to_string(),
                "monotonicity_violation": violation.map(|(a, b)| json!([a, b])),
            })
        });
        Verdict {
            admissible: ok,
            conclusive: true,
            reason: if ok {
                "degree-2 characterization satisfied".into()
            } else {
                "degree-2 characterization violated".into()
            },
            witness,
        }
    } else {
        let ok = admiss_hc_core::scaling::admissible_sum_deg3_sufficient(lambda, mu, nu);
        if ok {
            return Verdict {
                admissible: true,
                conclusive: true,
                reason: "degree-3 sufficient condition satisfied \
                         (lambda >= 0, mu >= 0, 15*lambda + 9*mu + nu > 0)"
                    .into(),
                witness: None,
            };
        }
        // strict monotonicity in each argument is necessary for every
        // sum-type objective, so a violation settles the question even
        // though the sufficient condition cannot
        if let Some((a, b)) = monotone_violation(scaling, bound) {
            return Verdict {
                admissible: false,
                conclusive: true,
                reason: format!(
                    "g(a+1, b) > g(a, b) fails at ({a}, {b}), a necessary condition"
                ),
                witness: Some(json!({
                    "condition": "g(a+1, b) > g(a, b)",
                    "violated_at": [a, b],
                })),
            };
        }
        Verdict {
            admissible: false,
            conclusive: false,
            reason: format!(
                "degree-3 sufficient condition fails and no monotonicity violation \
                 was found within bound {bound}; admissibility not established"
            ),
            witness: Some(json!({
                "condition": "lambda >= 0, mu >= 0, 15*lambda + 9*mu + nu > 0",
                "lambda": lambda.to_string(),
                "mu": mu.to_string(),
                "fifteen_lambda_plus_nine_mu_plus_nu":
                    (Rat::from_ratio(15, 1) * lambda.clone()
                        + Rat::from_ratio(9, 1) * mu.clone()
                        + nu.clone())
                    .to_string(),
            })),
        }
    }
}

/// Bounded refutation scans for scalings outside the characterized families
/// (tables, or polynomial scalings paired with the other aggregation).
fn scan_verdict(scaling: &Scaling<Rat>, kind: ObjectiveKind, bound: usize) -> Verdict {
    let mut problems = Vec::new();
    match kind {
        ObjectiveKind::Sum => {
            if let Some((a, b)) = monotone_violation(scaling, bound) {
                problems.push(json!({
                    "condition": "g(a+1, b) > g(a, b)",
                    "violated_at": [a, b],
                }));
            }
        }
        ObjectiveKind::Max => {
            if let Some((a, b, c, d)) = superadditive_violation(scaling, bound) {
                problems.push(json!({
                    "condition": "g(a+c, b+d) > g(a, b) + g(c, d)",
                    "violated_at": [a, b, c, d],
                }));
            }
            if let Some((a, b, c, d)) = functional_identity_witness(scaling, bound) {
                problems.push(json!({
                    "condition":
                        "g(a+b, c+d) + g(a, b) + g(c, d) = g(a+c, b+d) + g(a, c) + g(b, d)",
                    "violated_at": [a, b, c, d],
                }));
            }
        }
    }
    if problems.is_empty() {
        Verdict {
            admissible: true,
            conclusive: false,
            reason: format!(
                "no violation of the necessary conditions found within bound {bound} \
                 (bounded scan, not a proof of admissibility)"
            ),
            witness: None,
        }
    } else {
        Verdict {
            admissible: false,
            conclusive: true,
            reason: "a necessary condition for admissibility is violated".into(),
            witness: Some(json!(problems)),
        }
    }
}
