//! Built-in constructors for the simplest lattice surfaces and the
//! bottom-of-spectrum verifier.
//!
//! The four built-ins are translation surfaces; the half-translation
//! members of the same part of the spectrum (the pillowcase, and the torus
//! glued to a pillowcase along a slit) are outside this crate's scope and
//! have no constructors here.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::combinat::{CylinderDiagram, Permutation};
use crate::construct::{build_surface, TVData, TwistVector};
use crate::error::{Error, Result};
use crate::geom::{
    alpha_bounds, direction_classes, enumerate_saddle_connections, Direction,
    RectangleSurface,
};
use crate::numeric::{Precision, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Builtin {
    /// Unit square torus with one marked point at the origin.
    M1,
    /// Unit torus with marked points at the origin and (1/2, 0): two
    /// 1/2 x 1 rectangles side by side.
    M3,
    /// Unit torus with marked points at 0, (1/3, 0), (2/3, 0): three
    /// 1/3 x 1 rectangles in one horizontal cylinder.
    T3,
    /// Genus-2 surface from an L-shaped polygon of three squares of side
    /// 1/sqrt(3).
    Lshape3,
}

pub const ALL_BUILTINS: [Builtin; 4] = [Builtin::M1, Builtin::M3, Builtin::T3, Builtin::Lshape3];

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::M1 => "M1",
            Builtin::M3 => "M3",
            Builtin::T3 => "T3",
            Builtin::Lshape3 => "LSHAPE3",
        }
    }

    pub fn parse(name: &str) -> Result<Builtin> {
        match name.to_ascii_uppercase().as_str() {
            "M1" => Ok(Builtin::M1),
            "M3" => Ok(Builtin::M3),
            "T3" => Ok(Builtin::T3),
            "LSHAPE3" => Ok(Builtin::Lshape3),
            other => Err(Error::UnknownName(other.into())),
        }
    }

    /// The Thurston-Veech data generating the affine class of the surface.
    pub fn tv_data(self) -> TVData {
        let perm = |img: &[u64]| Permutation::from_one_based(img).unwrap();
        match self {
            Builtin::M1 => TVData::new(
                CylinderDiagram::new(perm(&[1]), perm(&[1])).unwrap(),
                TwistVector::ones(1),
                TwistVector::ones(1),
            )
            .unwrap(),
            Builtin::M3 => TVData::new(
                CylinderDiagram::new(perm(&[2, 1]), perm(&[1, 2])).unwrap(),
                TwistVector::ones(1),
                TwistVector::new(vec![1, 1]).unwrap(),
            )
            .unwrap(),
            Builtin::T3 => TVData::new(
                CylinderDiagram::new(perm(&[2, 3, 1]), perm(&[1, 2, 3])).unwrap(),
                TwistVector::ones(1),
                TwistVector::new(vec![1, 1, 1]).unwrap(),
            )
            .unwrap(),
            Builtin::Lshape3 => TVData::new(
                CylinderDiagram::new(perm(&[2, 1, 3]), perm(&[3, 2, 1])).unwrap(),
                TwistVector::new(vec![1, 2]).unwrap(),
                TwistVector::new(vec![1, 2]).unwrap(),
            )
            .unwrap(),
        }
    }

    /// Expected invariants: (genus, |Sigma|, gamma = tau/pi, exact alpha).
    pub fn expected(self) -> (u64, usize, u64, Scalar) {
        match self {
            Builtin::M1 => (1, 1, 2, Scalar::from_ratio(1, 2)),
            Builtin::M3 => (1, 2, 4, Scalar::from_ratio(1, 4)),
            Builtin::T3 => (1, 3, 6, Scalar::from_ratio(1, 6)),
            Builtin::Lshape3 => (2, 1, 6, Scalar::from_ratio(1, 6)),
        }
    }
}

/// Construct a built-in surface in its customary presentation: the tori
/// are laid out with unit-height cylinders and marked points on the
/// horizontal axis; the L-shaped surface is the normalized Thurston-Veech
/// build (all squares of side 1/sqrt(3)).
pub fn builtin(name: Builtin, prec: &Precision) -> Result<RectangleSurface> {
    let perm = |img: &[u64]| Permutation::from_one_based(img).unwrap();
    match name {
        Builtin::M1 => RectangleSurface::from_parts(
            CylinderDiagram::new(perm(&[1]), perm(&[1]))?,
            vec![Scalar::one()],
            vec![Scalar::one()],
            Some((vec![1], vec![1])),
            prec,
        ),
        Builtin::M3 => RectangleSurface::from_parts(
            CylinderDiagram::new(perm(&[2, 1]), perm(&[1, 2]))?,
            vec![Scalar::from_ratio(1, 2), Scalar::from_ratio(1, 2)],
            vec![Scalar::one()],
            Some((vec![1], vec![1, 1])),
            prec,
        ),
        Builtin::T3 => RectangleSurface::from_parts(
            CylinderDiagram::new(perm(&[2, 3, 1]), perm(&[1, 2, 3]))?,
            vec![
                Scalar::from_ratio(1, 3),
                Scalar::from_ratio(1, 3),
                Scalar::from_ratio(1, 3),
            ],
            vec![Scalar::one()],
            Some((vec![1], vec![1, 1, 1])),
            prec,
        ),
        Builtin::Lshape3 => Ok(build_surface(&Builtin::Lshape3.tv_data(), prec)?.surface),
    }
}

/// One verified property, for reporting.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub surface: String,
    pub checks: Vec<CheckLine>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Bottom-of-spectrum properties for a surface whose alpha bracket is an
/// exact value pi/tau: parallel saddle connections share one length per
/// direction, cylinder heights agree per direction, and all holonomies lie
/// in the rank-2 lattice spanned by the two shortest independent ones.
pub fn verify_bottom_of_spectrum(
    s: &RectangleSurface,
    l: &Scalar,
    prec: &Precision,
) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let a = alpha_bounds(s, l, prec)?;
    let pi_over_tau = Scalar::from_ratio(1, s.gamma() as i64);
    match &a.exact {
        Some(alpha) if alpha.cmp_certified(&pi_over_tau, prec)? == Ordering::Equal => {}
        _ => {
            return Err(Error::VerificationFailure(
                "surface does not attain alpha = pi/tau exactly".into(),
            ))
        }
    }
    let conns = enumerate_saddle_connections(s, l, prec)?;

    // (a) within each direction all saddle-connection lengths agree
    let mut parallel_ok = true;
    let mut parallel_detail = String::from("all parallel connections share a length");
    'outer: for class in direction_classes(s, &conns, prec)? {
        let first = class[0].len2();
        for c in &class[1..] {
            if c.len2().cmp_certified(&first, prec)? != Ordering::Equal {
                parallel_ok = false;
                parallel_detail = format!(
                    "direction of {:?} has lengths^2 {:?} and {:?}",
                    class[0].coeffs,
                    first,
                    c.len2()
                );
                break 'outer;
            }
        }
    }
    checks.push(CheckLine {
        name: "parallel-length-equality".into(),
        passed: parallel_ok,
        detail: parallel_detail,
    });

    // (b) cylinder heights agree per direction
    for dir in [Direction::Horizontal, Direction::Vertical] {
        let cyls = s.cylinders(dir);
        let mut ok = true;
        let mut detail = String::from("all heights equal");
        for c in &cyls[1..] {
            if c.height.cmp_certified(&cyls[0].height, prec)? != Ordering::Equal {
                ok = false;
                detail = format!("heights {:?} and {:?}", cyls[0].height, c.height);
                break;
            }
        }
        checks.push(CheckLine {
            name: match dir {
                Direction::Horizontal => "horizontal-cylinder-heights".into(),
                Direction::Vertical => "vertical-cylinder-heights".into(),
            },
            passed: ok,
            detail,
        });
    }

    // (c) hol(M) inside Z v + Z v' for the two shortest independent
    // holonomies: integrality of lattice coordinates, witnessing
    // arithmeticity
    let m = crate::geom::min_virtual_triangle_of(s, &conns, prec)?;
    checks.push(CheckLine {
        name: "rank-2-lattice-containment".into(),
        passed: m.certified,
        detail: format!("covolume {:?}, certified = {}", m.value, m.certified),
    });

    let report = VerifyReport {
        surface: String::new(),
        checks,
    };
    if report.passed() {
        Ok(report)
    } else {
        let first = report.checks.iter().find(|c| !c.passed).unwrap();
        Err(Error::VerificationFailure(format!(
            "{}: {}",
            first.name, first.detail
        )))
    }
}

/// Full per-surface verification used by `catalog verify`: expected
/// invariants, exact alpha, certified beta, twist consistency and the
/// bottom-of-spectrum properties.
pub fn verify_builtin(name: Builtin, l: &Scalar, prec: &Precision) -> Result<VerifyReport> {
    let s = builtin(name, prec)?;
    let (genus, sigma, gamma, alpha) = name.expected();
    let mut checks = Vec::new();
    let mut push = |check: &str, passed: bool, detail: String| {
        checks.push(CheckLine {
            name: check.into(),
            passed,
            detail,
        });
    };
    push(
        "genus",
        s.genus() == genus,
        format!("expected {genus}, computed {}", s.genus()),
    );
    push(
        "sigma-count",
        s.profile().sigma_count() == sigma,
        format!("expected {sigma}, computed {}", s.profile().sigma_count()),
    );
    push(
        "gamma",
        s.gamma() == gamma,
        format!("expected {gamma}, computed {}", s.gamma()),
    );
    let a = alpha_bounds(&s, l, prec)?;
    let alpha_ok = match &a.exact {
        Some(v) => v.cmp_certified(&alpha, prec)? == Ordering::Equal && v.is_exact(),
        None => false,
    };
    push(
        "exact-alpha",
        alpha_ok,
        format!("expected {alpha:?}, bracket [{:?}, {:?}]", a.lo, a.hi),
    );
    push(
        "certified-beta",
        a.beta.certified,
        format!("beta {:?}", a.beta.value),
    );
    // n_i mu_i constant per direction, exactly
    for dir in [Direction::Horizontal, Direction::Vertical] {
        let cyls = s.cylinders(dir);
        let n = s.twist_vector(dir);
        let ok = match &n {
            Some(n) => {
                let shear = cyls[0]
                    .inverse_modulus
                    .mul(&Scalar::from_integer(n[0] as i64));
                let mut all = true;
                for (c, &ni) in cyls.iter().zip(n.iter()) {
                    let v = c.inverse_modulus.mul(&Scalar::from_integer(ni as i64));
                    if v.cmp_certified(&shear, prec)? != Ordering::Equal {
                        all = false;
                        break;
                    }
                }
                all
            }
            None => false,
        };
        push(
            match dir {
                Direction::Horizontal => "horizontal-twist-consistency",
                Direction::Vertical => "vertical-twist-consistency",
            },
            ok,
            format!("twists {n:?}"),
        );
    }
    match verify_bottom_of_spectrum(&s, l, prec) {
        Ok(r) => checks.extend(r.checks),
        Err(e) => push("bottom-of-spectrum", false, format!("{e}")),
    }
    Ok(VerifyReport {
        surface: name.name().into(),
        checks,
    })
}

/// The lambda-cap contradiction guard: with the stated constant the cap
/// sqrt(2/tau) undercuts the measured shortest length on the marked torus;
/// with the safe constant sqrt(8/tau) every built-in satisfies the cap.
#[derive(Debug, Clone)]
pub struct LambdaCapFinding {
    pub surface: String,
    pub safe_constants: bool,
    pub cap: Scalar,
    pub measured: Scalar,
    /// True when measured lambda exceeds the cap (a contradiction of the
    /// stated bound).
    pub violated: bool,
}

pub fn check_lambda_cap(
    name: Builtin,
    safe_constants: bool,
    l: &Scalar,
    prec: &Precision,
) -> Result<LambdaCapFinding> {
    let s = builtin(name, prec)?;
    let cap = crate::bounds::shortest_sc_cap(&s.tau(), safe_constants, prec)?;
    let measured = crate::geom::measured_lambda(&s, l, prec)?;
    let violated = measured.cmp_certified(&cap, prec)? == Ordering::Greater;
    Ok(LambdaCapFinding {
        surface: name.name().into(),
        safe_constants,
        cap,
        measured,
        violated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn builtin_invariants_match_expectations() {
        let p = prec();
        for name in ALL_BUILTINS {
            let s = builtin(name, &p).unwrap();
            let (genus, sigma, gamma, _) = name.expected();
            assert_eq!(s.genus(), genus, "{}", name.name());
            assert_eq!(s.profile().sigma_count(), sigma, "{}", name.name());
            assert_eq!(s.gamma(), gamma, "{}", name.name());
            assert!(s.area().as_rational().is_some() || !s.area().is_exact());
        }
    }

    #[test]
    fn verify_all_builtins_at_l3() {
        let p = prec();
        let l = Scalar::from_integer(3);
        for name in ALL_BUILTINS {
            let report = verify_builtin(name, &l, &p).unwrap();
            assert!(
                report.passed(),
                "{} failed: {:?}",
                name.name(),
                report.checks.iter().find(|c| !c.passed)
            );
        }
    }

    #[test]
    fn exact_alpha_values() {
        let p = prec();
        let l = Scalar::from_integer(3);
        for (name, num, den) in [
            (Builtin::M1, 1i64, 2i64),
            (Builtin::M3, 1, 4),
            (Builtin::T3, 1, 6),
            (Builtin::Lshape3, 1, 6),
        ] {
            let s = builtin(name, &p).unwrap();
            let a = alpha_bounds(&s, &l, &p).unwrap();
            let alpha = a.exact.expect("bracket must close");
            assert_eq!(
                alpha.as_rational().unwrap(),
                &BigRational::new(num.into(), den.into()),
                "{}",
                name.name()
            );
        }
    }

    #[test]
    fn nst_quarter_and_sixth_reproduction() {
        // among built-ins, exactly {M1, M3} have exact alpha >= 1/4, and
        // all four have alpha >= 1/6
        let p = prec();
        let l = Scalar::from_integer(3);
        let quarter = Scalar::from_ratio(1, 4);
        let sixth = Scalar::from_ratio(1, 6);
        let mut in_quarter = alloc::vec::Vec::new();
        for name in ALL_BUILTINS {
            let s = builtin(name, &p).unwrap();
            let a = alpha_bounds(&s, &l, &p).unwrap();
            let alpha = a.exact.unwrap();
            if alpha.cmp_certified(&quarter, &p).unwrap() != Ordering::Less {
                in_quarter.push(name);
            }
            assert_ne!(
                alpha.cmp_certified(&sixth, &p).unwrap(),
                Ordering::Less,
                "{} below 1/6",
                name.name()
            );
        }
        assert_eq!(in_quarter, alloc::vec![Builtin::M1, Builtin::M3]);
    }

    #[test]
    fn lambda_cap_contradiction_detected_and_safe_variant_holds() {
        let p = prec();
        let l = Scalar::from_integer(3);
        // stated constant: the marked torus has lambda = 1 > sqrt(1/pi)
        let f = check_lambda_cap(Builtin::M1, false, &l, &p).unwrap();
        assert!(f.violated, "stated-constant contradiction must be detected");
        // safe constant: all built-ins satisfy lambda <= sqrt(8/tau)
        for name in ALL_BUILTINS {
            let f = check_lambda_cap(name, true, &l, &p).unwrap();
            assert!(!f.violated, "{} violates the safe cap", name.name());
        }
    }

    #[test]
    fn unknown_name_rejected() {
        assert!(matches!(
            Builtin::parse("M2"),
            Err(Error::UnknownName(_))
        ));
        assert_eq!(Builtin::parse("lshape3").unwrap(), Builtin::Lshape3);
    }

    #[test]
    fn uniform_periodicity_witness_on_builtins() {
        // ratios of lengths of parallel connections up to L = 3 never
        // exceed the module-bound value of s computed from the exact alpha
        let p = prec();
        let l = Scalar::from_integer(3);
        for name in ALL_BUILTINS {
            let s = builtin(name, &p).unwrap();
            let a = alpha_bounds(&s, &l, &p).unwrap();
            let alpha = a.exact.unwrap();
            let r = [Direction::Horizontal, Direction::Vertical]
                .iter()
                .map(|&d| s.cylinders(d).len())
                .max()
                .unwrap() as u32;
            let bound = crate::bounds::uniform_ratio_bound(&alpha, r, &p).unwrap();
            let bound2 = bound.mul(&bound);
            let conns = enumerate_saddle_connections(&s, &l, &p).unwrap();
            for class in direction_classes(&s, &conns, &p).unwrap() {
                let mut min2 = class[0].len2();
                let mut max2 = class[0].len2();
                for c in &class[1..] {
                    if c.len2().cmp_certified(&min2, &p).unwrap() == Ordering::Less {
                        min2 = c.len2();
                    }
                    if c.len2().cmp_certified(&max2, &p).unwrap() == Ordering::Greater {
                        max2 = c.len2();
                    }
                }
                let ratio2 = max2.div(&min2);
                assert_ne!(
                    ratio2.cmp_certified(&bound2, &p).unwrap(),
                    Ordering::Greater,
                    "{}: ratio^2 {:?} exceeds s^2 {:?}",
                    name.name(),
                    ratio2,
                    bound2
                );
            }
        }
    }
}
