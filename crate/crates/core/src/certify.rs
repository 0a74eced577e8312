//! Exact certification of the admissible exponent range.
//!
//! The minor-arc bound for the prime exponential sum is assembled from a
//! Heath–Brown decomposition into Type I and Type II bilinear sums; each
//! estimation branch contributes one affine exponent expression in
//! `(c, theta)`, valid on a dyadic window of `theta`. The minor-arc exponent
//! `sigma(c)` is the maximum of those branch expressions, and the endgame
//! inequalities (`C2-*`) compare combinations of `sigma` and the moment
//! axioms against the main-term exponent `4 - c`.
//!
//! Everything here is exact rational arithmetic; no floating point enters.
//! Log-power factors and the arbitrarily small `eta` are carried as exponent
//! zero, with a strictness flag on the final inequality: the admissible
//! range of `c` is an open interval and the threshold itself is its
//! supremum, not a member.
//!
//! Constraint inventory (names are stable; they appear in reports and tests):
//!
//! * `HB-1 .. HB-4` — hypotheses of the Heath–Brown identity on the
//!   decomposition parameters `U = X^u`, `V = X^v`, `Z = X^z`:
//!   `2z + u <= 1`, `2u <= z`, `1 <= 3v`, `theta1 <= theta2`.
//! * `TI-a` — Type I, lower `theta` window: the exponent-pair estimate with
//!   `pair_i` applied to the inner smooth sum.
//! * `TI-b1 .. TI-b11` — Type I, upper window: the eleven terms of the
//!   Sargos–Wu bilinear bound, each specialized to `F = X^c` (terms with a
//!   negative `F`-exponent instead use the minor-arc floor `F >= X`).
//! * `TII-a .. TII-c` — Type II: the differencing estimate with `pair_ii`,
//!   split into its `Q`-term, its exponent-pair term and its tail term.
//! * `C2-long`, `C2-tail`, `C2-final` — the endgame: the tail pair `pair_t`
//!   and the moment axioms close the argument against the main term; only
//!   `C2-final` is strict.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exppair::{parse_word, ExponentPair};
use crate::ratcore::{rat, AffineC, AffineCT, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("invalid decomposition parameters: {0}")]
    InvalidParams(String),
    #[error("parameters violate `{0}` regardless of c")]
    InfeasibleParams(String),
    #[error("constraint `{0}` is not monotone in c (negative c-coefficient)")]
    NonMonotone(String),
    #[error("constraint `{0}` is violated for every c")]
    InfeasibleForAllC(String),
    #[error("threshold re-verification failed at c = {0}")]
    ThresholdVerification(Rational),
    #[error("no feasible point on the tuning grid")]
    EmptyFeasibleGrid,
    #[error("grid step must be positive")]
    NonPositiveStep,
}

/// Exponents of the Heath–Brown decomposition ranges and of the Type I/II
/// machinery: `U = X^u`, `V = X^v`, `Z = X^z`, the Type I branch split
/// `theta1`, the Type I upper limit `theta2 = 1 - z`, and the differencing
/// length `Q = X^q_exp` (tied to `u`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub u: Rational,
    pub v: Rational,
    pub z: Rational,
    pub theta1: Rational,
    pub theta2: Rational,
    pub q_exp: Rational,
}

impl Params {
    /// The tuned values used throughout: `u = q = 304/2667`,
    /// `v = 1147/2667`, `z = 2363/5334`, split at `theta1 = 4961/10668`,
    /// hence `theta2 = 2971/5334`.
    pub fn reference() -> Self {
        let u = rat(304, 2667);
        let z = rat(2363, 5334);
        Params {
            q_exp: u.clone(),
            v: rat(1147, 2667),
            theta1: rat(4961, 10668),
            theta2: Rational::one() - z.clone(),
            z,
            u,
        }
    }

    pub fn validate(&self) -> Result<(), CertifyError> {
        let fail = |m: &str| Err(CertifyError::InvalidParams(m.to_string()));
        if !self.u.is_positive() {
            return fail("u must be positive");
        }
        if self.u > self.theta1 {
            return fail("u <= theta1 required");
        }
        if self.theta1 > self.theta2 {
            return fail("theta1 <= theta2 required");
        }
        if self.theta2 >= Rational::one() {
            return fail("theta2 < 1 required");
        }
        if self.u > self.v {
            return fail("u <= v required");
        }
        if self.q_exp != self.u {
            return fail("q_exp is tied to u");
        }
        if &self.theta2 + &self.z != Rational::one() {
            return fail("theta2 = 1 - z required");
        }
        Ok(())
    }
}

/// The three exponent pairs the system is built from: `type_i` for the
/// Type I inner sum, `type_ii` for the Type II differenced sum, and `tail`
/// for the endgame counting sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairs {
    pub type_i: ExponentPair,
    pub type_ii: ExponentPair,
    pub tail: ExponentPair,
}

impl Pairs {
    /// `A^2 B(0,1)`, `AB(0,1)` and the 19-letter tail word. Evaluated from
    /// the words rather than hard-coded, so the calculus itself vouches for
    /// the values `(1/14, 11/14)`, `(1/6, 2/3)`, `(1731/4492, 591/1123)`.
    pub fn reference() -> Self {
        let eval = |s: &str| parse_word(s).expect("literal word").eval(&ExponentPair::trivial());
        Pairs {
            type_i: eval("A2B"),
            type_ii: eval("AB"),
            tail: eval("BA3BA2BABABA2BABAB"),
        }
    }
}

/// One lower-bound expression for the minor-arc exponent: `sigma` must
/// dominate `sup` of `expr` over the `theta` window at every admissible `c`.
#[derive(Debug, Clone)]
pub struct SigmaBranch {
    pub name: &'static str,
    pub expr: AffineCT,
    pub theta_lo: Rational,
    pub theta_hi: Rational,
}

impl SigmaBranch {
    /// The branch's supremum over its window as an affine function of `c`.
    fn sup_affine(&self) -> AffineC {
        let at = if self.expr.ct.is_positive() { &self.theta_hi } else { &self.theta_lo };
        self.expr.at_theta(at)
    }

    fn sup_at(&self) -> Rational {
        if self.expr.ct.is_positive() { self.theta_hi.clone() } else { self.theta_lo.clone() }
    }
}

/// An expression affine in `(c, theta)` plus a coefficient on the symbolic
/// minor-arc exponent `sigma`.
#[derive(Debug, Clone)]
pub struct CtExpr {
    pub affine: AffineCT,
    pub sigma: Rational,
}

impl CtExpr {
    fn plain(affine: AffineCT) -> Self {
        CtExpr { affine, sigma: Rational::zero() }
    }
}

/// A named inequality `lhs <= rhs` (strict when flagged), with the left side
/// supremized over an optional `theta` window.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: &'static str,
    pub lhs: CtExpr,
    pub rhs: CtExpr,
    pub theta_range: Option<(Rational, Rational)>,
    pub strict: bool,
}

/// Moment exponents entering the endgame: second moment `m2 = 1` and fourth
/// moment `m4 = 4 - c`. They are axioms here — assumed, not derived — and
/// are spot-checked numerically in the `sums` module.
#[derive(Debug, Clone)]
pub struct MomentAxioms {
    pub m2: AffineCT,
    pub m4: AffineCT,
}

impl MomentAxioms {
    fn reference() -> Self {
        MomentAxioms {
            m2: AffineCT::constant(Rational::one()),
            m4: AffineCT::new(Rational::from_int(4), -Rational::one(), Rational::zero()),
        }
    }

    /// Exponent of the third absolute moment by Cauchy–Schwarz:
    /// `(m2 + m4)/2 = (5 - c)/2`.
    fn s3(&self) -> AffineCT {
        (self.m2.clone() + self.m4.clone()).scale(&rat(1, 2))
    }
}

/// The complete constraint system for one choice of pairs and parameters.
#[derive(Debug, Clone)]
pub struct CertSystem {
    pub params: Params,
    pub pairs: Pairs,
    pub hb: Vec<Constraint>,
    pub sigma_branches: Vec<SigmaBranch>,
    pub assembly: Vec<Constraint>,
    pub axioms: MomentAxioms,
}

const THETA_SPLIT_LOWER: (i64, i64) = (0, 1);

/// Builds the named constraint set: 4 Heath–Brown hypotheses, 1 + 11 Type I
/// branches, 3 Type II branches and 3 endgame inequalities.
pub fn build_system(pairs: Pairs, params: Params) -> Result<CertSystem, CertifyError> {
    params.validate()?;

    let zero = Rational::zero;
    let one = Rational::one;

    let constant = |q: Rational| AffineCT::constant(q);
    let hb = vec![
        Constraint {
            name: "HB-1",
            lhs: CtExpr::plain(constant(rat(2, 1) * &params.z + &params.u)),
            rhs: CtExpr::plain(constant(one())),
            theta_range: None,
            strict: false,
        },
        Constraint {
            name: "HB-2",
            lhs: CtExpr::plain(constant(rat(2, 1) * &params.u)),
            rhs: CtExpr::plain(constant(params.z.clone())),
            theta_range: None,
            strict: false,
        },
        Constraint {
            name: "HB-3",
            lhs: CtExpr::plain(constant(one())),
            rhs: CtExpr::plain(constant(rat(3, 1) * &params.v)),
            theta_range: None,
            strict: false,
        },
        Constraint {
            name: "HB-4",
            lhs: CtExpr::plain(constant(params.theta1.clone())),
            rhs: CtExpr::plain(constant(params.theta2.clone())),
            theta_range: None,
            strict: false,
        },
    ];

    let mut branches = Vec::new();

    // Type I, lower window [0, theta1]: with the pair (k, l) applied to the
    // inner sum of length L = X^{1-theta} and phase size |x| X^c / L, the
    // block exponent is k*c + (l - k)(1 - theta) + theta.
    let (ki, li) = (pairs.type_i.kappa().clone(), pairs.type_i.lambda().clone());
    branches.push(SigmaBranch {
        name: "TI-a",
        expr: AffineCT::new(
            &li - &ki,
            ki.clone(),
            one() - (&li - &ki),
        ),
        theta_lo: rat(THETA_SPLIT_LOWER.0, THETA_SPLIT_LOWER.1),
        theta_hi: params.theta1.clone(),
    });

    // Type I, upper window [theta1, theta2]: the eleven Sargos–Wu terms
    // (F^f M^m L^l)^{1/g} with F = X^c, M = X^theta, L = X^{1-theta}.
    // The last term has F to a negative power; the minor-arc floor
    // F = |x| X^c >= tau X^c = X gives its exponent.
    const SW_TERMS: [(i64, i64, i64, i64); 10] = [
        (4, 31, 34, 42),
        (6, 53, 51, 66),
        (6, 46, 41, 56),
        (2, 38, 29, 40),
        (1, 9, 6, 10),
        (2, 7, 6, 10),
        (3, 43, 32, 46),
        (1, 6, 6, 8),
        (0, 1, 2, 2),
        (0, 2, 1, 2),
    ];
    const SW_NAMES: [&str; 11] = [
        "TI-b1", "TI-b2", "TI-b3", "TI-b4", "TI-b5", "TI-b6", "TI-b7", "TI-b8", "TI-b9",
        "TI-b10", "TI-b11",
    ];
    for (idx, (f, m, l, g)) in SW_TERMS.iter().enumerate() {
        branches.push(SigmaBranch {
            name: SW_NAMES[idx],
            expr: AffineCT::new(rat(*l, *g), rat(*f, *g), rat(m - l, *g)),
            theta_lo: params.theta1.clone(),
            theta_hi: params.theta2.clone(),
        });
    }
    // Term 11 is F^{-1/2} M L: exponent -1/2 + theta + (1 - theta) = 1/2.
    branches.push(SigmaBranch {
        name: SW_NAMES[10],
        expr: constant(rat(1, 2)),
        theta_lo: params.theta1.clone(),
        theta_hi: params.theta2.clone(),
    });

    // Type II on [u, v].
    let q = params.q_exp.clone();
    let (kii, lii) = (pairs.type_ii.kappa().clone(), pairs.type_ii.lambda().clone());
    // (X^2 / Q)^{1/2}.
    branches.push(SigmaBranch {
        name: "TII-a",
        expr: constant((Rational::from_int(2) - &q) * rat(1, 2)),
        theta_lo: params.u.clone(),
        theta_hi: params.v.clone(),
    });
    // Exponent-pair term: (1/2)(1 + q k + (c-1) k + l + (1-l) theta).
    branches.push(SigmaBranch {
        name: "TII-b",
        expr: AffineCT::new(
            (one() + &q * &kii - &kii + &lii) * rat(1, 2),
            &kii * rat(1, 2),
            (one() - &lii) * rat(1, 2),
        ),
        theta_lo: params.u.clone(),
        theta_hi: params.v.clone(),
    });
    // Tail term: (1/2)(1 + theta - q).
    branches.push(SigmaBranch {
        name: "TII-c",
        expr: AffineCT::new((one() - &q) * rat(1, 2), zero(), rat(1, 2)),
        theta_lo: params.u.clone(),
        theta_hi: params.v.clone(),
    });

    // Endgame. s3 = (5 - c)/2 is the third-moment exponent from the axioms.
    let axioms = MomentAxioms::reference();
    let s3 = axioms.s3();
    let (kt, lt) = (pairs.tail.kappa().clone(), pairs.tail.lambda().clone());

    // Counting-sum contribution against the dominant inner pieces:
    // k_t c + (l_t - k_t) + (5 - c)/2 <= 1 + 3 sigma - c.
    let c2_long = Constraint {
        name: "C2-long",
        lhs: CtExpr::plain(
            AffineCT::new(&lt - &kt, kt.clone(), zero()) + s3.clone(),
        ),
        rhs: CtExpr {
            affine: AffineCT::new(one(), -one(), zero()),
            sigma: Rational::from_int(3),
        },
        theta_range: None,
        strict: false,
    };
    // Tail identity (1 - c) + 3 sigma <= 1 + 3 sigma - c: kept as a
    // tautology so the report shows where the inner tail piece lands.
    let c2_tail = Constraint {
        name: "C2-tail",
        lhs: CtExpr {
            affine: AffineCT::new(one(), -one(), zero()),
            sigma: Rational::from_int(3),
        },
        rhs: CtExpr {
            affine: AffineCT::new(one(), -one(), zero()),
            sigma: Rational::from_int(3),
        },
        theta_range: None,
        strict: false,
    };
    // Final Cauchy–Schwarz assembly, strict:
    // 1/2 + (5 - c)/4 + (1 + 3 sigma - c)/2 < 4 - c.
    let c2_final = Constraint {
        name: "C2-final",
        lhs: CtExpr {
            affine: constant(rat(1, 2))
                + s3.scale(&rat(1, 2))
                + AffineCT::new(one(), -one(), zero()).scale(&rat(1, 2)),
            sigma: rat(3, 2),
        },
        rhs: CtExpr::plain(AffineCT::new(Rational::from_int(4), -one(), zero())),
        theta_range: None,
        strict: true,
    };

    Ok(CertSystem {
        params,
        pairs,
        hb,
        sigma_branches: branches,
        assembly: vec![c2_long, c2_tail, c2_final],
        axioms,
    })
}

/// Convenience constructor for the reference system.
pub fn reference_system() -> CertSystem {
    build_system(Pairs::reference(), Params::reference()).expect("reference system is valid")
}

impl CertSystem {
    /// The exact minor-arc exponent at `c`: the maximum over every branch of
    /// its supremum over its `theta` window.
    pub fn sigma_of_c(&self, c: &Rational) -> Rational {
        self.sigma_branches
            .iter()
            .map(|b| b.sup_affine().eval(c))
            .max()
            .expect("system has branches")
    }

    /// Largest branch value among the `c`-independent branches; the floor
    /// `sigma(c)` can never undercut.
    pub fn sigma_floor(&self) -> Option<Rational> {
        self.sigma_branches
            .iter()
            .map(|b| b.sup_affine())
            .filter(|a| a.a1.is_zero())
            .map(|a| a.a0)
            .max()
    }

    /// Per-constraint slack report at a fixed `c`.
    pub fn verify_at(&self, c: &Rational) -> CertReport {
        let sigma = self.sigma_of_c(c);
        let mut rows = Vec::new();

        for k in &self.hb {
            let lhs = k.lhs.affine.eval(c, &Rational::zero());
            let rhs = k.rhs.affine.eval(c, &Rational::zero());
            let slack = &rhs - &lhs;
            rows.push(ReportRow::new(k.name, lhs, None, slack, k.strict));
        }
        for b in &self.sigma_branches {
            let sup = b.sup_affine().eval(c);
            let at = b.sup_at();
            rows.push(ReportRow::new(b.name, sup.clone(), Some(at), &sigma - &sup, false));
        }
        for k in &self.assembly {
            let (lhs_sup, at) = match &k.theta_range {
                Some((lo, hi)) => {
                    let (v, at) = k
                        .lhs
                        .affine
                        .sup_on_theta(c, lo, hi)
                        .expect("validated range");
                    (v, Some(at))
                }
                None => (k.lhs.affine.eval(c, &Rational::zero()), None),
            };
            let lhs = lhs_sup + &k.lhs.sigma * &sigma;
            let rhs = k.rhs.affine.eval(c, &Rational::zero()) + &k.rhs.sigma * &sigma;
            rows.push(ReportRow::new(k.name, lhs.clone(), at, rhs - lhs, k.strict));
        }

        let feasible = rows.iter().all(|r| !r.slack.is_negative());
        let interior =
            feasible && rows.iter().all(|r| !r.strict || r.slack.is_positive());
        let binding = rows
            .iter()
            .filter(|r| r.slack.is_zero())
            .map(|r| r.name.to_string())
            .collect();
        let violated = rows
            .iter()
            .filter(|r| r.slack.is_negative())
            .map(|r| r.name.to_string())
            .collect();

        CertReport { c: c.clone(), sigma, rows, feasible, interior, binding, violated }
    }

    /// The exact supremum of feasible `c`, its binding set, and the
    /// per-constraint threshold audit.
    ///
    /// Every constraint must tighten as `c` grows (nonnegative
    /// `c`-coefficient of `sup_theta lhs - rhs`, checked per active
    /// `sigma`-branch); the threshold of each assembly constraint is then the
    /// root of its violation function with `sigma` expanded branch by branch,
    /// and the system threshold is the minimum over assembly constraints.
    /// Branch audit thresholds solve `branch(c) = sigma floor`. The result
    /// is re-verified: feasible at the threshold (boundary sense), infeasible
    /// at `threshold + 10^{-6}`.
    pub fn threshold_c(&self) -> Result<Threshold, CertifyError> {
        // Parameters must be admissible independent of c.
        for k in &self.hb {
            let lhs = k.lhs.affine.eval(&Rational::zero(), &Rational::zero());
            let rhs = k.rhs.affine.eval(&Rational::zero(), &Rational::zero());
            if lhs > rhs {
                return Err(CertifyError::InfeasibleParams(k.name.to_string()));
            }
        }

        let branch_sups: Vec<(&'static str, AffineC)> = self
            .sigma_branches
            .iter()
            .map(|b| (b.name, b.sup_affine()))
            .collect();
        for (name, sup) in &branch_sups {
            if sup.a1.is_negative() {
                return Err(CertifyError::NonMonotone(name.to_string()));
            }
        }
        let floor = self.sigma_floor();

        let mut per_constraint: Vec<ConstraintThreshold> = Vec::new();
        let mut assembly_roots: Vec<(String, Rational)> = Vec::new();

        for k in &self.assembly {
            let root = self.assembly_root(k, &branch_sups)?;
            if let Some(r) = &root {
                assembly_roots.push((k.name.to_string(), r.clone()));
            }
            per_constraint.push(ConstraintThreshold { name: k.name.to_string(), cstar: root });
        }
        for (name, sup) in &branch_sups {
            let cstar = match (&floor, sup.a1.is_zero()) {
                (Some(f), false) => Some((f - &sup.a0) / sup.a1.clone()),
                _ => None,
            };
            per_constraint.push(ConstraintThreshold { name: name.to_string(), cstar });
        }

        let cstar = assembly_roots.iter().map(|(_, r)| r.clone()).min();
        let Some(cstar) = cstar else {
            // No c-binding constraint: the admissible range is open-ended up
            // to the supported limit.
            return Ok(Threshold {
                cstar: Rational::from_int(2),
                binding: Vec::new(),
                per_constraint,
                open_limit: true,
            });
        };

        let sigma_star = self.sigma_of_c(&cstar);
        let mut binding: Vec<String> = branch_sups
            .iter()
            .filter(|(_, sup)| sup.eval(&cstar) == sigma_star)
            .map(|(name, _)| name.to_string())
            .collect();
        binding.extend(
            assembly_roots
                .iter()
                .filter(|(_, r)| *r == cstar)
                .map(|(name, _)| name.clone()),
        );

        let at = self.verify_at(&cstar);
        let just_above = &cstar + rat(1, 1_000_000);
        let above = self.verify_at(&just_above);
        if !at.feasible || above.feasible {
            return Err(CertifyError::ThresholdVerification(cstar));
        }

        Ok(Threshold { cstar, binding, per_constraint, open_limit: false })
    }

    /// The root in `c` of one assembly constraint's violation function, with
    /// `sigma` expanded over the branches. With `g` the net `sigma`
    /// coefficient, the violation is `max_b piece_b` when `g > 0` and
    /// `min_b piece_b` when `g < 0`; with every piece nondecreasing in `c`
    /// the root is the min resp. max of the piece roots.
    fn assembly_root(
        &self,
        k: &Constraint,
        branch_sups: &[(&'static str, AffineC)],
    ) -> Result<Option<Rational>, CertifyError> {
        // sup over theta of the plain-affine part of lhs, minus rhs.
        let lhs_sup: AffineC = match &k.theta_range {
            Some((lo, hi)) => {
                let at = if k.lhs.affine.ct.is_positive() { hi } else { lo };
                k.lhs.affine.at_theta(at)
            }
            None => k.lhs.affine.at_theta(&Rational::zero()),
        };
        let res = lhs_sup.sub(&k.rhs.affine.at_theta(&Rational::zero()));
        let g = &k.lhs.sigma - &k.rhs.sigma;

        if g.is_zero() {
            if res.a1.is_negative() {
                return Err(CertifyError::NonMonotone(k.name.to_string()));
            }
            return match res.root() {
                Some(r) => Ok(Some(r)),
                None if res.a0.is_positive() => {
                    Err(CertifyError::InfeasibleForAllC(k.name.to_string()))
                }
                None => Ok(None),
            };
        }

        let mut roots: Vec<Rational> = Vec::new();
        let mut constant_violated = false;
        let mut constant_satisfied = false;
        for (_, sup) in branch_sups {
            let piece = res.add(&sup.scale(&g));
            if piece.a1.is_negative() {
                return Err(CertifyError::NonMonotone(k.name.to_string()));
            }
            match piece.root() {
                Some(r) => roots.push(r),
                None if piece.a0.is_positive() => constant_violated = true,
                None => constant_satisfied = true,
            }
        }

        if g.is_positive() {
            // violation = max over pieces.
            if constant_violated {
                return Err(CertifyError::InfeasibleForAllC(k.name.to_string()));
            }
            Ok(roots.into_iter().min())
        } else {
            // violation = min over pieces; one eternally satisfied piece
            // keeps the minimum nonpositive forever.
            if constant_satisfied {
                return Ok(None);
            }
            Ok(roots.into_iter().max())
        }
    }
}

/// One row of a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub name: String,
    /// Value of the (supremized) left-hand side, `sigma` already substituted.
    pub lhs: Rational,
    /// `theta` endpoint where the supremum is attained, when there is one.
    pub sup_at: Option<Rational>,
    pub slack: Rational,
    pub binding: bool,
    pub strict: bool,
}

impl ReportRow {
    fn new(
        name: &str,
        lhs: Rational,
        sup_at: Option<Rational>,
        slack: Rational,
        strict: bool,
    ) -> Self {
        let binding = slack.is_zero();
        ReportRow { name: name.to_string(), lhs, sup_at, slack, binding, strict }
    }
}

/// Verification of the whole system at a fixed `c`.
///
/// `feasible` is the boundary (closed) sense: every slack nonnegative.
/// `interior` additionally demands positive slack on strict constraints;
/// the admissible range of the underlying theorem is open, so its threshold
/// is feasible here but not interior.
#[derive(Debug, Clone, Serialize)]
pub struct CertReport {
    pub c: Rational,
    pub sigma: Rational,
    pub rows: Vec<ReportRow>,
    pub feasible: bool,
    pub interior: bool,
    pub binding: Vec<String>,
    pub violated: Vec<String>,
}

impl fmt::Display for CertReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "c = {}   sigma = {}", self.c, self.sigma)?;
        writeln!(
            f,
            "{:<9} {:>22} {:>14} {:>22} {}",
            "name", "lhs", "sup_at", "slack", "binding"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<9} {:>22} {:>14} {:>22} {}",
                r.name,
                r.lhs.to_string(),
                r.sup_at.as_ref().map_or("-".to_string(), |t| t.to_string()),
                r.slack.to_string(),
                if r.binding { "*" } else { "" },
            )?;
        }
        writeln!(f, "feasible: {}   interior: {}", self.feasible, self.interior)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintThreshold {
    pub name: String,
    /// `None` when the constraint never pins `c`.
    pub cstar: Option<Rational>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Threshold {
    pub cstar: Rational,
    pub binding: Vec<String>,
    pub per_constraint: Vec<ConstraintThreshold>,
    /// Set when no constraint depends on `c`; `cstar` is then the open upper
    /// limit of the supported range rather than a derived threshold.
    pub open_limit: bool,
}

/// Which decomposition parameters a tuning run may move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreeParam {
    U,
    V,
    Z,
    Theta1,
}

impl FreeParam {
    pub fn parse_list(s: &str) -> Result<Vec<FreeParam>, CertifyError> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| match t.trim() {
                "u" => Ok(FreeParam::U),
                "v" => Ok(FreeParam::V),
                "z" => Ok(FreeParam::Z),
                "theta1" => Ok(FreeParam::Theta1),
                other => Err(CertifyError::InvalidParams(format!("unknown parameter `{other}`"))),
            })
            .collect()
    }
}

/// Grid search over the free parameters maximizing the threshold.
///
/// Grid points that fail validation or the Heath–Brown hypotheses are
/// skipped. Ties on the threshold resolve to the lexicographically largest
/// `(u, v, z, theta1)` so a flat optimum reports its least-constrained
/// corner deterministically.
pub fn tune(
    free: &[FreeParam],
    step: &Rational,
    pairs: &Pairs,
    base: &Params,
) -> Result<(Params, Rational), CertifyError> {
    if !step.is_positive() {
        return Err(CertifyError::NonPositiveStep);
    }

    let mut best: Option<(Params, Rational)> = None;
    let mut candidate = base.clone();
    tune_rec(free, step, pairs, base, &mut candidate, &mut best)?;
    best.ok_or(CertifyError::EmptyFeasibleGrid)
}

fn tune_key(p: &Params) -> (Rational, Rational, Rational, Rational) {
    (p.u.clone(), p.v.clone(), p.z.clone(), p.theta1.clone())
}

fn tune_rec(
    free: &[FreeParam],
    step: &Rational,
    pairs: &Pairs,
    base: &Params,
    candidate: &mut Params,
    best: &mut Option<(Params, Rational)>,
) -> Result<(), CertifyError> {
    let Some((param, rest)) = free.split_first() else {
        candidate.q_exp = candidate.u.clone();
        candidate.theta2 = Rational::one() - &candidate.z;
        if candidate.validate().is_err() {
            return Ok(());
        }
        let Ok(system) = build_system(pairs.clone(), candidate.clone()) else {
            return Ok(());
        };
        let cstar = match system.threshold_c() {
            Ok(t) => t.cstar,
            // Grid points outside the admissible region are skipped, any
            // other failure is a bug worth surfacing.
            Err(CertifyError::InfeasibleParams(_)) | Err(CertifyError::InfeasibleForAllC(_)) => {
                return Ok(())
            }
            Err(e) => return Err(e),
        };
        let replace = match best {
            None => true,
            Some((incumbent, best_c)) => {
                cstar > *best_c || (cstar == *best_c && tune_key(candidate) > tune_key(incumbent))
            }
        };
        if replace {
            *best = Some((candidate.clone(), cstar));
        }
        return Ok(());
    };

    // March k*step across (0, 1); validation prunes the out-of-range part.
    let mut value = step.clone();
    while value < Rational::one() {
        match param {
            FreeParam::U => candidate.u = value.clone(),
            FreeParam::V => candidate.v = value.clone(),
            FreeParam::Z => candidate.z = value.clone(),
            FreeParam::Theta1 => candidate.theta1 = value.clone(),
        }
        tune_rec(rest, step, pairs, base, candidate, best)?;
        value = value + step;
    }
    match param {
        FreeParam::U => candidate.u = base.u.clone(),
        FreeParam::V => candidate.v = base.v.clone(),
        FreeParam::Z => candidate.z = base.z.clone(),
        FreeParam::Theta1 => candidate.theta1 = base.theta1.clone(),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    fn cstar() -> Rational {
        r(1193, 889)
    }

    #[test]
    fn reference_system_has_the_documented_shape() {
        let sys = reference_system();
        assert_eq!(sys.hb.len(), 4);
        assert_eq!(sys.sigma_branches.len(), 15); // TI-a, TI-b1..11, TII-a..c
        assert_eq!(sys.assembly.len(), 3);
        assert_eq!(sys.params.theta2, r(2971, 5334));
    }

    #[test]
    fn hb1_is_an_exact_identity_at_reference_params() {
        let p = Params::reference();
        assert_eq!(r(2, 1) * &p.z + &p.u, Rational::one());
        let report = reference_system().verify_at(&r(6, 5));
        let hb1 = report.rows.iter().find(|row| row.name == "HB-1").unwrap();
        assert!(hb1.slack.is_zero());
        let hb2 = report.rows.iter().find(|row| row.name == "HB-2").unwrap();
        assert!(hb2.slack.is_positive());
        let hb3 = report.rows.iter().find(|row| row.name == "HB-3").unwrap();
        assert!(hb3.slack.is_positive());
    }

    #[test]
    fn sigma_at_the_threshold_is_the_minor_arc_exponent() {
        let sys = reference_system();
        assert_eq!(sys.sigma_of_c(&cstar()), r(2515, 2667));
    }

    #[test]
    fn sigma_is_floored_by_the_q_term() {
        let sys = reference_system();
        assert_eq!(sys.sigma_floor(), Some(r(2515, 2667)));
        for c in [r(101, 100), r(11, 10), r(6, 5), r(97, 81), cstar()] {
            assert!(sys.sigma_of_c(&c) >= r(2515, 2667), "sigma undercut at c = {c}");
        }
        // Equality strictly below the threshold: every other branch stays
        // under the floor.
        assert_eq!(sys.sigma_of_c(&r(6, 5)), r(2515, 2667));
    }

    #[test]
    fn sigma_matches_endpoint_enumeration_oracle() {
        let sys = reference_system();
        for c in [r(6, 5), r(13, 10), cstar(), r(3, 2)] {
            let oracle = sys
                .sigma_branches
                .iter()
                .flat_map(|b| {
                    [
                        b.expr.eval(&c, &b.theta_lo),
                        b.expr.eval(&c, &b.theta_hi),
                    ]
                })
                .max()
                .unwrap();
            assert_eq!(sys.sigma_of_c(&c), oracle, "at c = {c}");
        }
    }

    #[test]
    fn verify_at_threshold_binds_the_documented_set() {
        let sys = reference_system();
        let report = sys.verify_at(&cstar());
        assert!(report.feasible);
        assert!(!report.interior, "the final constraint is strict at the boundary");
        let binding: std::collections::BTreeSet<_> =
            report.binding.iter().map(|s| s.as_str()).collect();
        let expected: std::collections::BTreeSet<_> =
            ["HB-1", "TI-a", "TII-a", "TII-b", "C2-long", "C2-tail", "C2-final"]
                .into_iter()
                .collect();
        assert_eq!(binding, expected);
    }

    #[test]
    fn verify_inside_the_range_is_interior() {
        let sys = reference_system();
        let report = sys.verify_at(&r(97, 81));
        assert!(report.feasible && report.interior);
        // Only the structural identities sit at zero slack strictly inside:
        // the parameter identity HB-1, the sigma floor TII-a and the
        // tautological C2-tail.
        let binding: std::collections::BTreeSet<_> =
            report.binding.iter().map(|s| s.as_str()).collect();
        let expected: std::collections::BTreeSet<_> =
            ["HB-1", "TII-a", "C2-tail"].into_iter().collect();
        assert_eq!(binding, expected);
    }

    #[test]
    fn verify_beyond_the_range_is_infeasible() {
        let sys = reference_system();
        let report = sys.verify_at(&r(3, 2));
        assert!(!report.feasible);
        assert!(report.violated.iter().any(|n| n == "C2-final"));
    }

    #[test]
    fn threshold_is_exact() {
        let sys = reference_system();
        let t = sys.threshold_c().unwrap();
        assert_eq!(t.cstar, cstar());
        assert!(!t.open_limit);
        for name in ["TI-a", "TII-b", "C2-long", "C2-final"] {
            assert!(t.binding.iter().any(|b| b == name), "missing binding {name}");
        }
    }

    #[test]
    fn per_constraint_thresholds_audit() {
        let sys = reference_system();
        let t = sys.threshold_c().unwrap();
        let get = |name: &str| {
            t.per_constraint
                .iter()
                .find(|ct| ct.name == name)
                .unwrap_or_else(|| panic!("no threshold row {name}"))
                .cstar
                .clone()
        };
        // The four binding constraints all solve to the threshold itself.
        for name in ["TI-a", "TII-b", "C2-long", "C2-final"] {
            assert_eq!(get(name), Some(cstar()), "constraint {name}");
        }
        // Spot-frozen values for two bilinear-term thresholds, computed by
        // solving term = 2515/2667 at the binding theta endpoint by hand.
        assert_eq!(get("TI-b1"), Some(r(24897, 14224)));
        assert_eq!(get("TI-b6"), Some(r(15325, 10668)));
        // Every bilinear term clears the threshold.
        for i in 1..=11 {
            match get(&format!("TI-b{i}")) {
                Some(v) => assert!(v >= cstar(), "TI-b{i} threshold below cstar"),
                None => {} // no c-dependence: never binds
            }
        }
        // The minimum over all defined per-constraint thresholds is the
        // threshold, attained exactly by the four binding constraints.
        let min = t
            .per_constraint
            .iter()
            .filter_map(|ct| ct.cstar.clone())
            .min()
            .unwrap();
        assert_eq!(min, cstar());
        let argmin: std::collections::BTreeSet<_> = t
            .per_constraint
            .iter()
            .filter(|ct| ct.cstar == Some(cstar()))
            .map(|ct| ct.name.as_str())
            .collect();
        let expected: std::collections::BTreeSet<_> =
            ["TI-a", "TII-b", "C2-long", "C2-final"].into_iter().collect();
        assert_eq!(argmin, expected);
    }

    #[test]
    fn weaker_tail_pair_lowers_the_threshold() {
        let mut pairs = Pairs::reference();
        pairs.tail = ExponentPair::new(r(1, 2), r(1, 2)).unwrap();
        let sys = build_system(pairs, Params::reference()).unwrap();
        let t = sys.threshold_c().unwrap();
        assert!(t.cstar < cstar());
        assert_eq!(t.cstar, r(2363, 1778));
    }

    #[test]
    fn hb_only_system_reports_the_open_limit() {
        let mut sys = reference_system();
        sys.sigma_branches.clear();
        sys.assembly.clear();
        // sigma is gone with the branches; threshold must cope.
        let t = sys.threshold_c().unwrap();
        assert!(t.open_limit);
        assert_eq!(t.cstar, Rational::from_int(2));
        assert!(t.binding.is_empty());
    }

    #[test]
    fn redundant_constraints_do_not_move_the_threshold() {
        let mut sys = reference_system();
        // c <= 3/2, far above the threshold.
        sys.assembly.push(Constraint {
            name: "redundant",
            lhs: CtExpr::plain(AffineCT::in_c()),
            rhs: CtExpr::plain(AffineCT::constant(r(3, 2))),
            theta_range: None,
            strict: false,
        });
        let t = sys.threshold_c().unwrap();
        assert_eq!(t.cstar, cstar());
    }

    #[test]
    fn feasibility_is_monotone_in_c() {
        let sys = reference_system();
        let mut cs: Vec<Rational> = (1..50)
            .map(|k| Rational::one() + r(k, 51) * r(9, 10))
            .collect();
        cs.push(cstar());
        cs.sort();
        let mut seen_infeasible = false;
        for c in cs {
            let feasible = sys.verify_at(&c).feasible;
            if seen_infeasible {
                assert!(!feasible, "feasibility resurfaced at c = {c}");
            }
            if !feasible {
                seen_infeasible = true;
            }
        }
    }

    #[test]
    fn moment_identities() {
        let sys = reference_system();
        // 3 sigma and 1 + 3 sigma at the threshold.
        let sigma = sys.sigma_of_c(&cstar());
        assert_eq!(r(3, 1) * &sigma, r(2515, 889));
        assert_eq!(Rational::one() + r(3, 1) * sigma, r(3404, 889));
        // (k_t c + (l_t - k_t)) + (5 - c)/2 agrees with the closed form
        // (11863 - 515 c)/4492 coefficient by coefficient.
        let kt = sys.pairs.tail.kappa().clone();
        let lt = sys.pairs.tail.lambda().clone();
        let lhs = AffineCT::new(&lt - &kt, kt, Rational::zero()) + sys.axioms.s3();
        assert_eq!(lhs.c0, r(11863, 4492));
        assert_eq!(lhs.cc, r(-515, 4492));
        assert!(lhs.ct.is_zero());
    }

    #[test]
    fn tune_with_no_freedom_returns_the_reference_threshold() {
        let (params, cstar_found) = tune(&[], &r(1, 5334), &Pairs::reference(), &Params::reference()).unwrap();
        assert_eq!(params, Params::reference());
        assert_eq!(cstar_found, cstar());
    }

    #[test]
    fn tune_recovers_u() {
        let (params, cstar_found) =
            tune(&[FreeParam::U], &r(1, 5334), &Pairs::reference(), &Params::reference()).unwrap();
        assert_eq!(params.u, r(304, 2667));
        assert_eq!(cstar_found, cstar());
    }

    #[test]
    fn tune_recovers_theta1() {
        let (params, cstar_found) = tune(
            &[FreeParam::Theta1],
            &r(1, 10668),
            &Pairs::reference(),
            &Params::reference(),
        )
        .unwrap();
        assert_eq!(params.theta1, r(4961, 10668));
        assert_eq!(cstar_found, cstar());
    }

    #[test]
    fn invalid_params_are_rejected() {
        let mut p = Params::reference();
        p.theta1 = r(3, 4); // above theta2
        assert!(build_system(Pairs::reference(), p).is_err());
        let mut p = Params::reference();
        p.q_exp = r(1, 10);
        assert!(build_system(Pairs::reference(), p).is_err());
    }
}
