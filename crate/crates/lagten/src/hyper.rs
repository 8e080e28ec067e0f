//! Linear systems of hypersurfaces with base conditions along planes or
//! points, plus sampled singularity scans and restriction helpers.

use crate::exec;
use crate::field::{FieldError, FieldSpec, Scalar};
use crate::grassmann::Plane;
use crate::matrix::{ExactMatrix, LinearError};
use crate::poly::{self, MultiPoly, PolyError};
use crate::tens::{lift_poly, proj_count, proj_point_from_index};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HyperError {
    #[error("system dimension is {0}, not 1")]
    NotUnique(usize),
    #[error("scan needs {needed} points but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("extension scans start from a prime field")]
    ExtensionBase,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A linear system of degree-d forms in n variables cut out by linear
/// conditions, kept as an explicit basis.
#[derive(Clone, Debug)]
pub struct FormSystem {
    pub n: usize,
    pub d: usize,
    pub basis: Vec<MultiPoly>,
    /// rank of the imposed conditions
    pub cond_rank: usize,
}

impl FormSystem {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub(crate) fn kernel_system(
    field: &FieldSpec,
    n: usize,
    d: usize,
    conditions: ExactMatrix,
) -> FormSystem {
    let monos = poly::monomials(n, d);
    let cond_rank = conditions.rank(field);
    let ker = conditions.kernel(field);
    let mut basis = vec![];
    for c in 0..ker.ncols() {
        let dense: Vec<Scalar> = (0..ker.nrows()).map(|r| ker.get(r, c).clone()).collect();
        basis.push(MultiPoly::from_dense(n, d, field, &monos, &dense));
    }
    FormSystem { n, d, basis, cond_rank }
}

/// Degree-d forms in six variables vanishing identically on every plane.
/// Each plane imposes one condition per degree-d monomial in its three
/// parameters: the corresponding coefficient of the restricted form.
pub fn through_planes(field: &FieldSpec, planes: &[Plane], d: usize) -> FormSystem {
    let monos6 = poly::monomials(6, d);
    let monos3 = poly::monomials(3, d);
    let mut rows = vec![];
    for plane in planes {
        let sub = plane.mat().transpose(); // x = M^T (s,t,u)
        // restriction of each ambient monomial, expanded in the plane parameters
        let restricted: Vec<MultiPoly> = monos6
            .iter()
            .map(|e| {
                MultiPoly::monomial(6, e, field.one(), field).substitute_linear(field, &sub)
            })
            .collect();
        for e3 in &monos3 {
            let row: Vec<Scalar> = restricted
                .iter()
                .map(|r| r.coeff(e3).cloned().unwrap_or_else(|| field.zero()))
                .collect();
            rows.push(row);
        }
    }
    let conditions = if rows.is_empty() {
        ExactMatrix::zeros(field, 1, monos6.len())
    } else {
        ExactMatrix::from_rows(rows)
    };
    kernel_system(field, 6, d, conditions)
}

/// Degree-d forms in n variables vanishing at all given points.
pub fn through_points(
    field: &FieldSpec,
    n: usize,
    d: usize,
    points: &[Vec<Scalar>],
) -> FormSystem {
    let monos = poly::monomials(n, d);
    let conditions = if points.is_empty() {
        ExactMatrix::zeros(field, 1, monos.len())
    } else {
        ExactMatrix::from_fn(points.len(), monos.len(), |i, j| {
            let m = MultiPoly::monomial(n, &monos[j], field.one(), field);
            m.eval(field, &points[i])
        })
    };
    kernel_system(field, n, d, conditions)
}

/// The normalized generator of a one dimensional system.
pub fn unique_form(field: &FieldSpec, sys: &FormSystem) -> Result<MultiPoly, HyperError> {
    if sys.basis.len() != 1 {
        return Err(HyperError::NotUnique(sys.basis.len()));
    }
    Ok(sys.basis[0].normalize(field))
}

/// Substitutes the plane parametrization into a six variable form, returning
/// a ternary form in the plane parameters.
pub fn restrict_to_plane(field: &FieldSpec, f: &MultiPoly, plane: &Plane) -> MultiPoly {
    assert_eq!(f.n, 6);
    f.substitute_linear(field, &plane.mat().transpose())
}

/// Coordinates of a point with respect to the plane's row basis, when the
/// point lies on the plane.
pub fn plane_coordinates(
    field: &FieldSpec,
    plane: &Plane,
    point: &[Scalar],
) -> Option<Vec<Scalar>> {
    let lhs = plane.mat().transpose(); // 6x3
    let rhs = ExactMatrix::from_rows(vec![point.to_vec()]).transpose(); // 6x1
    let sol = lhs.solve(field, &rhs).ok()?;
    Some((0..3).map(|r| sol.particular.get(r, 0).clone()).collect())
}

#[derive(Clone, Debug)]
pub struct SingularPoint {
    pub level: usize,
    pub field: FieldSpec,
    pub point: Vec<Scalar>,
}

#[derive(Debug)]
pub struct ScanOutcome {
    pub found: Vec<SingularPoint>,
    pub scanned_points: u128,
    pub max_level: usize,
    /// an empty scan is partial evidence, and this note says so
    pub note: String,
}

/// Enumerates P^5 over F_{p^k} for k = 1..=max_ext and returns every point
/// where the form and all six partials vanish. The budget caps the total
/// number of points visited; exceeding it is an error, not a truncation.
pub fn singular_scan(
    field: &FieldSpec,
    f: &MultiPoly,
    max_ext: usize,
    budget: u128,
) -> Result<ScanOutcome, HyperError> {
    assert_eq!(f.n, 6, "scan expects a form on P^5");
    let p = field.characteristic();
    assert!(p > 0, "scan needs a finite field");
    if max_ext > 1 && field.degree() > 1 {
        return Err(HyperError::ExtensionBase);
    }

    let mut needed: u128 = 0;
    for k in 1..=max_ext {
        let q = (field.order().expect("finite")).pow(k as u32);
        needed += proj_count(q, 5);
    }
    if needed > budget {
        return Err(HyperError::BudgetExceeded { needed, budget });
    }

    let mut found = vec![];
    let mut scanned: u128 = 0;
    for k in 1..=max_ext {
        let level_field = if k == 1 {
            field.clone()
        } else {
            FieldSpec::ext_field(p, k, 0)?
        };
        let fk = if k == 1 { f.clone() } else { lift_poly(&level_field, f) };
        let grad = fk.gradient(&level_field);
        let total = proj_count(level_field.order().expect("finite"), 5);
        let total64 = u64::try_from(total).expect("level too large");
        let lf = &level_field;
        let fk_ref = &fk;
        let grad_ref = &grad;
        let hits: Vec<Vec<Scalar>> = exec::map_ranges(total64, 8192, move |lo, hi| {
            (lo..hi)
                .filter_map(|t| {
                    let pt = proj_point_from_index(lf, 5, t as u128);
                    if !lf.is_zero(&fk_ref.eval(lf, &pt)) {
                        return None;
                    }
                    if grad_ref.iter().all(|g| lf.is_zero(&g.eval(lf, &pt))) {
                        Some(pt)
                    } else {
                        None
                    }
                })
                .collect()
        });
        scanned += total;
        for pt in hits {
            found.push(SingularPoint { level: k, field: level_field.clone(), point: pt });
        }
    }
    let note = if found.is_empty() {
        format!(
            "no singular point found on P^5 over extensions of degree up to {max_ext}; \
             this is partial evidence, not a smoothness proof"
        )
    } else {
        format!("{} singular points found", found.len())
    };
    Ok(ScanOutcome { found, scanned_points: scanned, max_level: max_ext, note })
}

#[derive(Clone, Debug)]
pub struct PositionReport {
    pub collinear_triples: Vec<[usize; 3]>,
    pub conic_sextuples: Vec<[usize; 6]>,
    /// dimension of the ternary cubics through all the points
    pub cubic_dim: usize,
}

/// Exhaustive position tests for a small set of coplanar points, given in
/// plane coordinates: collinear triples, sextuples on a conic, and the
/// dimension of cubics through all points.
pub fn position_check(field: &FieldSpec, pts: &[Vec<Scalar>]) -> PositionReport {
    let n = pts.len();
    assert!((2..=12).contains(&n), "expected between 2 and 12 points");
    assert!(pts.iter().all(|p| p.len() == 3));

    let mut collinear_triples = vec![];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let m = ExactMatrix::from_rows(vec![
                    pts[a].clone(),
                    pts[b].clone(),
                    pts[c].clone(),
                ]);
                if m.rank(field) < 3 {
                    collinear_triples.push([a, b, c]);
                }
            }
        }
    }

    let monos2 = poly::monomials(3, 2);
    let mut conic_sextuples = vec![];
    if n >= 6 {
        let mut idx = [0usize; 6];
        fn rec(
            field: &FieldSpec,
            pts: &[Vec<Scalar>],
            monos2: &[Vec<u8>],
            idx: &mut [usize; 6],
            pos: usize,
            start: usize,
            out: &mut Vec<[usize; 6]>,
        ) {
            if pos == 6 {
                let m = ExactMatrix::from_fn(6, 6, |i, j| {
                    MultiPoly::monomial(3, &monos2[j], field.one(), field)
                        .eval(field, &pts[idx[i]])
                });
                if m.rank(field) < 6 {
                    out.push(*idx);
                }
                return;
            }
            for s in start..pts.len() {
                idx[pos] = s;
                rec(field, pts, monos2, idx, pos + 1, s + 1, out);
            }
        }
        rec(field, pts, &monos2, &mut idx, 0, 0, &mut conic_sextuples);
    }

    let cubic_dim = through_points(field, 3, 3, pts).dim();
    PositionReport { collinear_triples, conic_sextuples, cubic_dim }
}
