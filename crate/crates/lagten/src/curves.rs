//! Plane curves with assigned base multiplicities, the ten nodal sextic of
//! the icosahedral pencil, and the two plane tens built from it: images of
//! multiplication maps between short linear systems, recorded as ordinary
//! plane configurations once expressed in a basis of the target system.

use thiserror::Error;

use crate::exec;
use crate::field::{FieldError, FieldSpec, Scalar};
use crate::grassmann::{projective_normalize, GrassmannError, Plane};
use crate::hyper::{kernel_system, unique_form, FormSystem, HyperError};
use crate::matrix::{ExactMatrix, LinearError};
use crate::poly::{monomials, MultiPoly, PolyError};
use crate::tens::{lift_poly, proj_count, proj_point_from_index, Provenance, TenConfig};

#[derive(Debug, Error)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("expected {expected} base points, found {got}")]
    WrongNodeCount { expected: usize, got: usize },
    #[error("the system of {what} has dimension {got}, expected {expected}")]
    SystemDimension { what: String, expected: usize, got: usize },
    #[error("a product of the factor systems falls outside the target system")]
    ProductOutsideSystem,
    #[error("no prime in {lo}..={hi} splits exactly ten singular points")]
    NoSplittingPrime { lo: u64, hi: u64 },
    #[error("the assembled configuration fails verification: {0}")]
    BadConfiguration(String),
}

/// Points of the projective plane with assigned multiplicities.
#[derive(Clone, Debug)]
pub struct MultPointSet {
    pub field: FieldSpec,
    pub points: Vec<(Vec<Scalar>, usize)>,
}

impl MultPointSet {
    pub fn new(
        field: &FieldSpec,
        points: Vec<(Vec<Scalar>, usize)>,
    ) -> Result<MultPointSet, CurveError> {
        let normalized: Vec<Vec<Scalar>> =
            points.iter().map(|(p, _)| projective_normalize(field, p)).collect();
        for i in 0..normalized.len() {
            for j in i + 1..normalized.len() {
                if normalized[i] == normalized[j] {
                    return Err(CurveError::DuplicatePoint(i, j));
                }
            }
        }
        for (p, m) in &points {
            assert_eq!(p.len(), 3, "plane points have three coordinates");
            assert!(*m >= 1, "multiplicities start at one");
        }
        Ok(MultPointSet { field: field.clone(), points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same points with every multiplicity replaced by m.
    pub fn with_multiplicity(&self, m: usize) -> MultPointSet {
        let points = self.points.iter().map(|(p, _)| (p.clone(), m)).collect();
        MultPointSet { field: self.field.clone(), points }
    }

    /// A copy with the i-th point dropped.
    pub fn without(&self, i: usize) -> MultPointSet {
        let points = self
            .points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, x)| x.clone())
            .collect();
        MultPointSet { field: self.field.clone(), points }
    }

    /// A copy with the i-th multiplicity raised to m.
    pub fn raised_at(&self, i: usize, m: usize) -> MultPointSet {
        let mut points = self.points.clone();
        points[i].1 = m;
        MultPointSet { field: self.field.clone(), points }
    }
}

/// Value of the alpha-th partial derivative of the monomial x^e at a point.
fn monomial_partial_at(
    field: &FieldSpec,
    e: &[u8],
    alpha: &[u8],
    point: &[Scalar],
) -> Scalar {
    let mut acc = field.one();
    for i in 0..3 {
        let (ei, ai) = (e[i] as u64, alpha[i] as u64);
        if ei < ai {
            return field.zero();
        }
        for t in 0..ai {
            acc = field.mul(&acc, &field.from_u64(ei - t));
        }
        if ei > ai {
            acc = field.mul(&acc, &field.pow(&point[i], (ei - ai) as u128));
        }
    }
    acc
}

/// Ternary forms of degree d whose order m-1 partial derivatives all vanish
/// at each assigned point. In characteristic larger than d this pins the
/// full multiplicity condition, lower jets following by the Euler relation.
pub fn forms_with_mult(field: &FieldSpec, d: usize, s: &MultPointSet) -> FormSystem {
    let p = field.characteristic();
    assert!(p == 0 || p as usize > d, "the characteristic must exceed the degree");
    let monos = monomials(3, d);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (point, m) in &s.points {
        for alpha in monomials(3, m - 1) {
            rows.push(
                monos.iter().map(|e| monomial_partial_at(field, e, &alpha, point)).collect(),
            );
        }
    }
    let conditions = if rows.is_empty() {
        ExactMatrix::zeros(field, 1, monos.len())
    } else {
        ExactMatrix::from_rows(rows)
    };
    kernel_system(field, 3, d, conditions)
}

/// Number of linear conditions the point set nominally imposes.
pub fn expected_conditions(s: &MultPointSet) -> usize {
    s.points.iter().map(|(_, m)| m * (m + 1) / 2).sum()
}

/// Whether the imposed conditions came out linearly independent.
pub fn conditions_independent(s: &MultPointSet, sys: &FormSystem) -> bool {
    sys.cond_rank == expected_conditions(s)
}

/// Rechecks, through the derivative chain rather than the condition rows,
/// that every basis member kills all jets of order below the multiplicity.
pub fn verify_jets(field: &FieldSpec, sys: &FormSystem, s: &MultPointSet) -> bool {
    for f in &sys.basis {
        for (point, m) in &s.points {
            for order in 0..*m {
                for alpha in monomials(3, order) {
                    let mut g = f.clone();
                    for (var, reps) in alpha.iter().enumerate() {
                        for _ in 0..*reps {
                            g = g.partial(field, var);
                        }
                    }
                    if !field.is_zero(&g.eval(field, point)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The ten nodal plane sextic invariant under the icosahedral action,
/// 32x^6 + 27xy^5 - 120x^4yz + 150x^2y^2z^2 + 5y^3z^3 + 27xz^5.
pub fn winger_sextic(field: &FieldSpec) -> MultiPoly {
    let term = |e: [u8; 3], c: i64| (e.to_vec(), field.from_i64(c));
    MultiPoly::from_terms(
        3,
        6,
        field,
        vec![
            term([6, 0, 0], 32),
            term([1, 5, 0], 27),
            term([4, 1, 1], -120),
            term([2, 2, 2], 150),
            term([0, 3, 3], 5),
            term([1, 0, 5], 27),
        ],
    )
    .expect("the displayed form is homogeneous")
}

/// Enumerates the plane over the degree max_ext extension and returns every
/// point where the curve and its three partials vanish, in scan order.
pub fn find_nodes(
    base: &FieldSpec,
    f: &MultiPoly,
    max_ext: usize,
) -> Result<MultPointSet, CurveError> {
    assert_eq!(f.n, 3);
    let field = if max_ext <= 1 || base.degree() > 1 {
        base.clone()
    } else {
        FieldSpec::ext_field(base.characteristic(), max_ext, 0)?
    };
    let lifted = if field == *base { f.clone() } else { lift_poly(&field, f) };
    let partials: Vec<MultiPoly> = (0..3).map(|i| lifted.partial(&field, i)).collect();
    let q = field.order().expect("node scans need a finite field");
    let total = u64::try_from(proj_count(q, 2)).expect("plane scan fits u64");
    let found: Vec<Vec<Scalar>> = exec::map_ranges(total, 8192, |lo, hi| {
        let mut out = Vec::new();
        for idx in lo..hi {
            let pt = proj_point_from_index(&field, 2, idx as u128);
            if !field.is_zero(&lifted.eval(&field, &pt)) {
                continue;
            }
            if partials.iter().all(|dp| field.is_zero(&dp.eval(&field, &pt))) {
                out.push(pt);
            }
        }
        out
    });
    MultPointSet::new(&field, found.into_iter().map(|p| (p, 1)).collect())
}

/// First prime in the range whose reduction of the ten nodal sextic has
/// exactly ten singular points over the quadratic extension.
pub fn winger_prime_scan(lo: u64, hi: u64) -> Result<(u64, MultPointSet), CurveError> {
    let mut p = lo;
    while p <= hi {
        if crate::field::is_prime_u64(p) && p > 5 {
            let base = FieldSpec::prime(p)?;
            let nodes = find_nodes(&base, &winger_sextic(&base), 2)?;
            if nodes.len() == 10 {
                return Ok((p, nodes));
            }
        }
        p += 1;
    }
    Err(CurveError::NoSplittingPrime { lo, hi })
}

/// Smallest good prime for the node splitting, frozen from a scan of the
/// primes from 31 to 499.
pub const WINGER_PRIME: u64 = 31;

/// The frozen field and the ten nodes of the sextic over it.
pub fn winger_nodes() -> Result<(FieldSpec, MultPointSet), CurveError> {
    let base = FieldSpec::prime(WINGER_PRIME)?;
    let nodes = find_nodes(&base, &winger_sextic(&base), 2)?;
    if nodes.len() != 10 {
        return Err(CurveError::WrongNodeCount { expected: 10, got: nodes.len() });
    }
    Ok((nodes.field.clone(), nodes))
}

/// Which of the two multiplication constructions to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CobleKind {
    /// septics double at the nodes; partner systems are quartics
    Septic,
    /// decimics triple at the nodes; partner systems are septics
    Decimic,
}

#[derive(Clone, Debug)]
pub struct CobleData {
    pub kind: CobleKind,
    pub field: FieldSpec,
    pub nodes: MultPointSet,
    /// the six dimensional target system the planes live in
    pub system: FormSystem,
    /// (cubic dimension, partner dimension) for each node
    pub per_node_dims: Vec<(usize, usize)>,
    pub config: TenConfig,
}

/// Coordinates of a form with respect to the basis of a six dimensional
/// system, solved exactly against the dense coefficient columns.
fn system_coordinates(
    field: &FieldSpec,
    sys: &FormSystem,
    f: &MultiPoly,
) -> Result<Vec<Scalar>, CurveError> {
    let monos = monomials(3, sys.d);
    let dense = |g: &MultiPoly| -> Vec<Scalar> {
        monos.iter().map(|e| g.coeff(e).cloned().unwrap_or_else(|| field.zero())).collect()
    };
    let cols: Vec<Vec<Scalar>> = sys.basis.iter().map(|b| dense(b)).collect();
    let a = ExactMatrix::from_rows(cols).transpose();
    let rhs = ExactMatrix::from_rows(vec![dense(f)]).transpose();
    let sol = a.solve(field, &rhs).map_err(|_| CurveError::ProductOutsideSystem)?;
    Ok((0..sys.basis.len()).map(|i| sol.particular.get(i, 0).clone()).collect())
}

fn coble_ten(
    field: &FieldSpec,
    nodes: &MultPointSet,
    kind: CobleKind,
) -> Result<CobleData, CurveError> {
    if nodes.len() != 10 {
        return Err(CurveError::WrongNodeCount { expected: 10, got: nodes.len() });
    }
    let (target_deg, target_mult, partner_deg, recipe) = match kind {
        CobleKind::Septic => (7usize, 2usize, 4usize, "coble-septic"),
        CobleKind::Decimic => (10, 3, 7, "coble-decimic"),
    };
    let target_set = nodes.with_multiplicity(target_mult);
    let system = forms_with_mult(field, target_deg, &target_set);
    if system.dim() != 6 {
        return Err(CurveError::SystemDimension {
            what: format!("degree {target_deg} forms {target_mult}-fold at the ten nodes"),
            expected: 6,
            got: system.dim(),
        });
    }
    let mut per_node_dims = Vec::with_capacity(10);
    let mut planes = Vec::with_capacity(10);
    for i in 0..10 {
        let cubics = forms_with_mult(field, 3, &nodes.without(i).with_multiplicity(1));
        if cubics.dim() != 1 {
            return Err(CurveError::SystemDimension {
                what: format!("cubics through the nine nodes other than node {i}"),
                expected: 1,
                got: cubics.dim(),
            });
        }
        let cubic = unique_form(field, &cubics)?;
        let partner_set = match kind {
            CobleKind::Septic => nodes.with_multiplicity(1).raised_at(i, 2),
            CobleKind::Decimic => nodes.with_multiplicity(2).raised_at(i, 3),
        };
        let partner = forms_with_mult(field, partner_deg, &partner_set);
        if partner.dim() != 3 {
            return Err(CurveError::SystemDimension {
                what: format!("degree {partner_deg} forms with the extra condition at node {i}"),
                expected: 3,
                got: partner.dim(),
            });
        }
        per_node_dims.push((cubics.dim(), partner.dim()));
        let rows: Vec<Vec<Scalar>> = partner
            .basis
            .iter()
            .map(|g| system_coordinates(field, &system, &cubic.mul(field, g)))
            .collect::<Result<_, _>>()?;
        planes.push(Plane::new(field, ExactMatrix::from_rows(rows))?);
    }
    let config = TenConfig {
        field: field.clone(),
        planes,
        provenance: Provenance {
            recipe: recipe.to_string(),
            seed: 0,
            source: format!(
                "multiplication images over F_{}^{} from the ten nodal sextic",
                field.characteristic(),
                field.degree()
            ),
        },
    };
    let report = config.verify();
    if !report.all_incident || !report.isotropic || report.span_dim != 10 {
        return Err(CurveError::BadConfiguration(format!(
            "incident {} isotropic {} span {}",
            report.all_incident, report.isotropic, report.span_dim
        )));
    }
    Ok(CobleData { kind, field: field.clone(), nodes: nodes.clone(), system, per_node_dims, config })
}

/// Ten planes of septic images: for each node, the unique cubic through the
/// other nine nodes times the three dimensional system of quartics with a
/// double point there.
pub fn coble_septic_ten(
    field: &FieldSpec,
    nodes: &MultPointSet,
) -> Result<CobleData, CurveError> {
    coble_ten(field, nodes, CobleKind::Septic)
}

/// Ten planes of decimic images: the same cubics times septics double at all
/// nodes and triple at the distinguished one.
pub fn coble_decimic_ten(
    field: &FieldSpec,
    nodes: &MultPointSet,
) -> Result<CobleData, CurveError> {
    coble_ten(field, nodes, CobleKind::Decimic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epw::{epw_form, is_scalar_power, LagrangianSubspace};
    use crate::hyper::through_planes;
    use std::sync::OnceLock;

    fn winger_fixture() -> &'static (FieldSpec, MultPointSet) {
        static NODES: OnceLock<(FieldSpec, MultPointSet)> = OnceLock::new();
        NODES.get_or_init(|| winger_nodes().expect("the frozen prime splits ten nodes"))
    }

    #[test]
    fn winger_form_has_the_stated_coefficients() {
        let f = FieldSpec::rationals();
        let w = winger_sextic(&f);
        assert_eq!(w.terms.len(), 6);
        assert_eq!(w.coeff(&[6, 0, 0]), Some(&f.from_i64(32)));
        assert_eq!(w.coeff(&[4, 1, 1]), Some(&f.from_i64(-120)));
        // (1,0,0) is not on the curve
        let at_e0 = w.eval(&f, &[f.one(), f.zero(), f.zero()]);
        assert_eq!(at_e0, f.from_i64(32));
    }

    #[test]
    fn lines_through_a_point_have_dimension_two() {
        let f = FieldSpec::prime(11).unwrap();
        let s = MultPointSet::new(&f, vec![(vec![f.one(), f.from_u64(2), f.from_u64(3)], 1)])
            .unwrap();
        let sys = forms_with_mult(&f, 1, &s);
        assert_eq!(sys.dim(), 2);
        assert!(conditions_independent(&s, &sys));
        assert!(verify_jets(&f, &sys, &s));
    }

    #[test]
    fn node_scan_at_the_frozen_prime_finds_ten() {
        let (f, nodes) = winger_fixture();
        assert_eq!(nodes.len(), 10);
        // the nodes all happen to be rational over the prime subfield, in a
        // set stable under swapping the last two coordinates
        let expected: [[u64; 3]; 10] = [
            [1, 3, 3],
            [1, 17, 6],
            [1, 13, 11],
            [1, 24, 12],
            [1, 11, 13],
            [1, 6, 17],
            [1, 26, 21],
            [1, 22, 22],
            [1, 12, 24],
            [1, 21, 26],
        ];
        let w = lift_poly(f, &winger_sextic(&FieldSpec::prime(WINGER_PRIME).unwrap()));
        let partials: Vec<MultiPoly> = (0..3).map(|i| w.partial(f, i)).collect();
        for ((pt, m), row) in nodes.points.iter().zip(expected) {
            assert_eq!(*m, 1);
            let frozen: Vec<Scalar> = row.iter().map(|&x| f.from_u64(x)).collect();
            assert_eq!(*pt, frozen);
            assert!(f.is_zero(&w.eval(f, pt)));
            for dp in &partials {
                assert!(f.is_zero(&dp.eval(f, pt)));
            }
        }
    }

    #[test]
    #[ignore = "rescans every prime up to 499; the outcome is frozen in WINGER_PRIME"]
    fn frozen_prime_is_the_first_that_splits() {
        let (p, nodes) = winger_prime_scan(31, 499).unwrap();
        assert_eq!(p, WINGER_PRIME);
        assert_eq!(nodes.len(), 10);
    }

    #[test]
    fn septic_ten_matches_its_quadric_cube() {
        let (f, nodes) = winger_fixture();
        let data = coble_septic_ten(f, nodes).unwrap();
        assert_eq!(data.system.dim(), 6);
        assert!(conditions_independent(&nodes.with_multiplicity(2), &data.system));
        assert!(verify_jets(f, &data.system, &nodes.with_multiplicity(2)));
        assert!(data.per_node_dims.iter().all(|&d| d == (1, 3)));
        let report = data.config.verify();
        assert!(report.all_incident && report.isotropic);
        assert_eq!(report.span_dim, 10);
        // a unique quadric contains all ten planes, and the degeneracy locus
        // of their span is that quadric cubed
        let quadrics = through_planes(f, &data.config.planes, 2);
        assert_eq!(quadrics.dim(), 1);
        let q = unique_form(f, &quadrics).unwrap();
        let a = LagrangianSubspace::from_config(&data.config).unwrap();
        let form = epw_form(&a, 2).unwrap();
        let sextic = form.sextic.as_ref().expect("the septic ten is not degenerate");
        assert!(is_scalar_power(f, sextic, &q, 3));
    }

    #[test]
    fn decimic_ten_matches_its_cubic_square() {
        let (f, nodes) = winger_fixture();
        let data = coble_decimic_ten(f, nodes).unwrap();
        assert_eq!(data.system.dim(), 6);
        assert!(conditions_independent(&nodes.with_multiplicity(3), &data.system));
        assert!(data.per_node_dims.iter().all(|&d| d == (1, 3)));
        let report = data.config.verify();
        assert!(report.all_incident && report.isotropic);
        assert_eq!(report.span_dim, 10);
        let cubics = through_planes(f, &data.config.planes, 3);
        assert_eq!(cubics.dim(), 1);
        let c = unique_form(f, &cubics).unwrap();
        let a = LagrangianSubspace::from_config(&data.config).unwrap();
        let form = epw_form(&a, 2).unwrap();
        let sextic = form.sextic.as_ref().expect("the decimic ten is not degenerate");
        assert!(is_scalar_power(f, sextic, &c, 2));
    }

    #[test]
    fn plane_construction_is_basis_independent() {
        let (f, nodes) = winger_fixture();
        let data = coble_septic_ten(f, nodes).unwrap();
        // rebuild the node zero plane from a recombined partner basis and a
        // rescaled cubic; the span must be the same
        let cubics = forms_with_mult(f, 3, &nodes.without(0).with_multiplicity(1));
        let cubic = unique_form(f, &cubics).unwrap().scale(f, &f.from_u64(17));
        let partner = forms_with_mult(f, 4, &nodes.with_multiplicity(1).raised_at(0, 2));
        let b = &partner.basis;
        let recombined = vec![
            b[0].add(f, &b[1]),
            b[1].add(f, &b[2].scale(f, &f.from_u64(5))),
            b[0].add(f, &b[2]),
        ];
        let rows: Vec<Vec<Scalar>> = recombined
            .iter()
            .map(|g| system_coordinates(f, &data.system, &cubic.mul(f, g)).unwrap())
            .collect();
        let rebuilt = Plane::new(f, ExactMatrix::from_rows(rows)).unwrap();
        assert_eq!(
            rebuilt.plucker_normalized(f),
            data.config.planes[0].plucker_normalized(f)
        );
    }
}
