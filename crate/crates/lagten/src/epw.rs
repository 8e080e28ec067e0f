//! Degeneracy loci of a Lagrangian subspace of the third wedge of a six
//! dimensional space. Entry points measure the corank of individual points,
//! recover the degree six equation of the locus from chart determinants,
//! spot check singularity along configured planes, and enumerate the
//! decomposable members over small fields.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exec;
use crate::field::{FieldError, FieldSpec, Scalar, MAX_EXT};
use crate::grassmann::{is_decomposable, pairing, quads, triple_index, Decomposability, Plane};
use crate::hyper::{self, HyperError};
use crate::matrix::{ExactMatrix, LinearError};
use crate::poly::{
    homogenize, monomials, newton_simplex_interpolate, simplex_exponents, MultiPoly, PolyError,
};
use crate::tens::{proj_count, proj_point_from_index, TenConfig};

#[derive(Debug, Error)]
pub enum EpwError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error("expected a rank ten row space, got rank {0}")]
    NotLagrangian(usize),
    #[error("basis rows {0} and {1} pair to a nonzero value")]
    NotIsotropic(usize, usize),
    #[error("no extension of F_{0} of degree at most {MAX_EXT} reaches 101 elements")]
    FieldTooSmall(u64),
    #[error("scan needs {needed} points but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("the form vanishes identically, nothing to sample")]
    DegenerateInput,
    #[error("self check failed: {0}")]
    SelfCheck(String),
    #[error("plane {plane} sample {sample} does not satisfy the {what} condition")]
    NotSingular { plane: usize, sample: usize, what: String },
    #[error("{0}")]
    Unsupported(String),
}

/// A ten dimensional subspace of the 20 dimensional third wedge on which the
/// wedge pairing vanishes identically. The basis is kept in reduced row
/// echelon form so equal spans compare equal.
#[derive(Clone, Debug)]
pub struct LagrangianSubspace {
    field: FieldSpec,
    rows: ExactMatrix,
    pub source: String,
}

impl LagrangianSubspace {
    pub fn new(field: &FieldSpec, span: &ExactMatrix, source: &str) -> Result<Self, EpwError> {
        assert_eq!(span.ncols(), 20, "third wedge coordinates have length 20");
        let ech = span.rref(field);
        if ech.pivots.len() != 10 {
            return Err(EpwError::NotLagrangian(ech.pivots.len()));
        }
        let rows = ExactMatrix::from_rows(ech.mat.rows_vec().into_iter().take(10).collect());
        for i in 0..10 {
            for j in i..10 {
                if !field.is_zero(&pairing(field, rows.row(i), rows.row(j))) {
                    return Err(EpwError::NotIsotropic(i, j));
                }
            }
        }
        Ok(LagrangianSubspace { field: field.clone(), rows, source: source.to_string() })
    }

    /// Row space of the normalized Pluecker vectors of a configuration.
    pub fn from_config(cfg: &TenConfig) -> Result<Self, EpwError> {
        let rows = cfg.planes.iter().map(|p| p.plucker_normalized(&cfg.field)).collect();
        LagrangianSubspace::new(&cfg.field, &ExactMatrix::from_rows(rows), &cfg.provenance.recipe)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> &ExactMatrix {
        &self.rows
    }

    /// The same subspace with entries reinterpreted in an extension field.
    fn lifted_rows(&self, target: &FieldSpec) -> Result<ExactMatrix, EpwError> {
        if *target == self.field {
            return Ok(self.rows.clone());
        }
        let rows = (0..10)
            .map(|i| {
                self.rows
                    .row(i)
                    .iter()
                    .map(|x| target.embed_constant(x))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExactMatrix::from_rows(rows))
    }
}

/// Coordinates of v ^ e_a ^ e_b in the lexicographic triple basis.
pub fn wedge_point_pair(field: &FieldSpec, v: &[Scalar], a: usize, b: usize) -> Vec<Scalar> {
    assert!(a < b && b < 6);
    let mut out = vec![field.zero(); 20];
    for (i, vi) in v.iter().enumerate() {
        if i == a || i == b || field.is_zero(vi) {
            continue;
        }
        let (t, negate) = if i < a {
            ([i as u8, a as u8, b as u8], false)
        } else if i < b {
            ([a as u8, i as u8, b as u8], true)
        } else {
            ([a as u8, b as u8, i as u8], false)
        };
        out[triple_index(&t)] = if negate { field.neg(vi) } else { vi.clone() };
    }
    out
}

/// The fifteen products v ^ e_a ^ e_b stacked as rows; their span is the
/// space of third wedge vectors divisible by v.
pub fn wedge_span(field: &FieldSpec, v: &[Scalar]) -> ExactMatrix {
    let mut rows = Vec::with_capacity(15);
    for a in 0..6 {
        for b in a + 1..6 {
            rows.push(wedge_point_pair(field, v, a, b));
        }
    }
    ExactMatrix::from_rows(rows)
}

fn corank_in(field: &FieldSpec, rows: &ExactMatrix, v: &[Scalar]) -> usize {
    let w = wedge_span(field, v);
    let stack = ExactMatrix::stack_vertical(&[&w, rows]);
    20 - stack.rank(field)
}

/// Dimension of the meet of the subspace with the space of vectors divisible
/// by v, computed as a rank defect of the 25 x 20 stack of both spans.
pub fn corank(a: &LagrangianSubspace, v: &[Scalar]) -> usize {
    assert_eq!(v.len(), 6);
    assert!(v.iter().any(|x| !a.field.is_zero(x)), "corank needs a nonzero point");
    corank_in(&a.field, &a.rows, v)
}

fn chart_pairs(c: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(10);
    for a in 0..6 {
        for b in a + 1..6 {
            if a != c && b != c {
                out.push((a, b));
            }
        }
    }
    out
}

/// Determinant of the 20 x 20 matrix whose first ten columns span the part of
/// the divisibility space visible away from coordinate c and whose last ten
/// columns are the subspace basis. Homogeneous of degree ten in v.
pub fn chart_det(field: &FieldSpec, rows: &ExactMatrix, c: usize, v: &[Scalar]) -> Scalar {
    let mut m = ExactMatrix::zeros(field, 20, 20);
    for (j, &(a, b)) in chart_pairs(c).iter().enumerate() {
        let col = wedge_point_pair(field, v, a, b);
        for (r, x) in col.into_iter().enumerate() {
            m.set(r, j, x);
        }
    }
    for j in 0..10 {
        for r in 0..20 {
            m.set(r, 10 + j, rows.get(j, r).clone());
        }
    }
    m.det(field).expect("the chart matrix is square")
}

const MIN_FORM_ORDER: u128 = 101;

/// Smallest usable coefficient field: the input itself when it has at least
/// 101 elements, otherwise a fixed extension of a prime input.
fn working_field(base: &FieldSpec) -> Result<FieldSpec, EpwError> {
    match base.order() {
        None => Ok(base.clone()),
        Some(q) if q >= MIN_FORM_ORDER => Ok(base.clone()),
        Some(_) => {
            if base.degree() != 1 {
                return Err(EpwError::Unsupported(
                    "a small extension field cannot be extended further".into(),
                ));
            }
            let p = base.characteristic();
            let mut k = 2usize;
            while (p as u128).pow(k as u32) < MIN_FORM_ORDER {
                k += 1;
            }
            if k > MAX_EXT {
                return Err(EpwError::FieldTooSmall(p));
            }
            Ok(FieldSpec::ext_field(p, k, 0)?)
        }
    }
}

fn node_values(field: &FieldSpec, d: usize) -> Vec<Scalar> {
    (0..=d as u64)
        .map(|j| if field.is_rational() { field.from_u64(j) } else { field.element_from_index(j) })
        .collect()
}

/// How the sextic was obtained from the degree ten chart determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormPath {
    /// full degree ten interpolation followed by exact division by the
    /// fourth power of the chart coordinate
    ExactDivision,
    /// degree six interpolation on the affine chart, then homogenized
    AffineChart,
}

#[derive(Clone, Debug)]
pub struct FormReport {
    /// field the returned coefficients live in
    pub field: FieldSpec,
    /// normalized sextic equation, None when every chart vanishes identically
    pub sextic: Option<MultiPoly>,
    pub chart: Option<usize>,
    pub path: Option<FormPath>,
    /// true when the coefficients lie in the input field
    pub coefficients_in_base: bool,
    /// fresh sample points where the determinant identity was rechecked
    pub checked_points: usize,
    /// other charts whose determinants matched up to one global scalar
    pub cross_checked_charts: usize,
}

enum ChartOutcome {
    Zero,
    Sextic { q: MultiPoly, path: FormPath },
}

fn grid_values(
    field: &FieldSpec,
    rows: &ExactMatrix,
    c: usize,
    h: usize,
    d: usize,
) -> (Vec<Vec<u8>>, Vec<Scalar>) {
    let vars: Vec<usize> = (0..6).filter(|&x| x != h).collect();
    let nodes = node_values(field, d);
    let grid = simplex_exponents(5, d);
    let values = exec::map_ranges(grid.len() as u64, 64, |lo, hi| {
        (lo..hi)
            .map(|i| {
                let exp = &grid[i as usize];
                let mut v = vec![field.zero(); 6];
                v[h] = field.one();
                for (slot, &var) in vars.iter().enumerate() {
                    v[var] = nodes[exp[slot] as usize].clone();
                }
                chart_det(field, rows, c, &v)
            })
            .collect()
    });
    (grid, values)
}

fn recover_chart(
    field: &FieldSpec,
    rows: &ExactMatrix,
    c: usize,
) -> Result<ChartOutcome, EpwError> {
    let h = if c == 0 { 1 } else { 0 };
    let (_, values) = grid_values(field, rows, c, h, 10);
    if values.iter().all(|x| field.is_zero(x)) {
        return Ok(ChartOutcome::Zero);
    }
    // newton_simplex_interpolate walks the same simplex grid in the same
    // order, so the precomputed values can be fed back sequentially
    let mut feed = values.into_iter();
    let nodes = node_values(field, 10);
    let coeffs =
        newton_simplex_interpolate(field, 5, 10, &nodes, |_| feed.next().expect("grid order"));
    let g = homogenize(field, &coeffs, 6, 10, h);
    let mut cexp = [0u8; 6];
    cexp[c] = 4;
    let xc4 = MultiPoly::monomial(6, &cexp, field.one(), field);
    match g.divide_exact(field, &xc4) {
        Ok(q) => Ok(ChartOutcome::Sextic { q, path: FormPath::ExactDivision }),
        Err(PolyError::NotDivisible(_)) => {
            let q = affine_chart_recover(field, rows, c)?.ok_or_else(|| {
                EpwError::SelfCheck(format!(
                    "chart {c} determinant is nonzero yet vanishes on the whole affine grid"
                ))
            })?;
            Ok(ChartOutcome::Sextic { q, path: FormPath::AffineChart })
        }
        Err(e) => Err(e.into()),
    }
}

fn affine_chart_recover(
    field: &FieldSpec,
    rows: &ExactMatrix,
    c: usize,
) -> Result<Option<MultiPoly>, EpwError> {
    let (_, values) = grid_values(field, rows, c, c, 6);
    if values.iter().all(|x| field.is_zero(x)) {
        return Ok(None);
    }
    let mut feed = values.into_iter();
    let nodes = node_values(field, 6);
    let coeffs =
        newton_simplex_interpolate(field, 5, 6, &nodes, |_| feed.next().expect("grid order"));
    Ok(Some(homogenize(field, &coeffs, 6, 6, c)))
}

fn random_point(field: &FieldSpec, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..6).map(|_| field.rand_scalar(rng)).collect();
        if v.iter().any(|x| !field.is_zero(x)) {
            return v;
        }
    }
}

fn verify_identity(
    field: &FieldSpec,
    rows: &ExactMatrix,
    c: usize,
    q: &MultiPoly,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<usize, EpwError> {
    for i in 0..count {
        let v = random_point(field, rng);
        let det = chart_det(field, rows, c, &v);
        let rhs = field.mul(&q.eval(field, &v), &field.pow(&v[c], 4));
        if det != rhs {
            return Err(EpwError::SelfCheck(format!(
                "chart {c} determinant identity fails at sample {i}"
            )));
        }
    }
    Ok(count)
}

fn cross_chart_check(
    field: &FieldSpec,
    rows: &ExactMatrix,
    c: usize,
    q: &MultiPoly,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<usize, EpwError> {
    let mut done = 0;
    for c2 in 0..6 {
        if c2 == c {
            continue;
        }
        let mut scale: Option<Scalar> = None;
        for i in 0..count {
            let v = random_point(field, rng);
            let det = chart_det(field, rows, c2, &v);
            let den = field.mul(&q.eval(field, &v), &field.pow(&v[c2], 4));
            match &scale {
                None if field.is_zero(&den) => {
                    if !field.is_zero(&det) {
                        return Err(EpwError::SelfCheck(format!(
                            "chart {c2} determinant does not vanish with the recovered form \
                             at sample {i}"
                        )));
                    }
                }
                None => scale = Some(field.div(&det, &den).expect("nonzero denominator")),
                Some(s) => {
                    if det != field.mul(s, &den) {
                        return Err(EpwError::SelfCheck(format!(
                            "charts {c} and {c2} disagree beyond a global scalar at sample {i}"
                        )));
                    }
                }
            }
        }
        done += 1;
    }
    Ok(done)
}

fn map_back(base: &FieldSpec, wf: &FieldSpec, q: MultiPoly) -> (FieldSpec, MultiPoly, bool) {
    if base == wf {
        return (base.clone(), q, true);
    }
    let mut items = Vec::with_capacity(q.terms.len());
    for (e, c) in &q.terms {
        match wf.as_prime_subfield(c) {
            Some(u) => items.push((e.clone(), base.from_u64(u))),
            None => return (wf.clone(), q, false),
        }
    }
    let mapped = MultiPoly::from_terms(6, 6, base, items).expect("terms stay homogeneous");
    (base.clone(), mapped, true)
}

/// Recovers the degree six equation of the degeneracy locus. Each coordinate
/// chart yields a degree ten determinant which must be the fourth power of
/// the chart coordinate times a fixed sextic; the factorization is verified
/// by exact division and by rechecking the identity at fresh points, and the
/// remaining charts are compared against the result up to one global scalar.
/// Inputs over fields with fewer than 101 elements are lifted to a fixed
/// extension and the coefficients are mapped back when possible.
pub fn epw_form(a: &LagrangianSubspace, seed: u64) -> Result<FormReport, EpwError> {
    let wf = working_field(&a.field)?;
    let rows = a.lifted_rows(&wf)?;
    for c in 0..6 {
        let (q, path) = match recover_chart(&wf, &rows, c)? {
            ChartOutcome::Zero => continue,
            ChartOutcome::Sextic { q, path } => (q, path),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6570_775f_666f_726d);
        let checked = verify_identity(&wf, &rows, c, &q, 100, &mut rng)?;
        let cross = cross_chart_check(&wf, &rows, c, &q, 100, &mut rng)?;
        let (field, sextic, in_base) = map_back(&a.field, &wf, q.normalize(&wf));
        return Ok(FormReport {
            field,
            sextic: Some(sextic),
            chart: Some(c),
            path: Some(path),
            coefficients_in_base: in_base,
            checked_points: checked,
            cross_checked_charts: cross,
        });
    }
    Ok(FormReport {
        field: a.field.clone(),
        sextic: None,
        chart: None,
        path: None,
        coefficients_in_base: true,
        checked_points: 0,
        cross_checked_charts: 0,
    })
}

#[derive(Clone, Debug)]
pub struct SingularSampleReport {
    pub planes: usize,
    pub samples_per_plane: usize,
    /// points confirmed to kill the form and all six partials
    pub checked: usize,
    /// corank at each pairwise meeting point of the configuration
    pub meet_point_coranks: Vec<(usize, usize, usize)>,
}

/// Samples random points on every configured plane and demands that the form
/// and all six partial derivatives vanish there; any nonzero value is a hard
/// error. Coranks at the pairwise meeting points are reported alongside.
pub fn singular_samples(
    a: &LagrangianSubspace,
    cfg: &TenConfig,
    form: &FormReport,
    samples: usize,
    seed: u64,
) -> Result<SingularSampleReport, EpwError> {
    let sextic = form.sextic.as_ref().ok_or(EpwError::DegenerateInput)?;
    let field = &form.field;
    let partials: Vec<MultiPoly> = (0..6).map(|i| sextic.partial(field, i)).collect();
    let lift = |row: &[Scalar]| -> Result<Vec<Scalar>, EpwError> {
        if *field == cfg.field {
            Ok(row.to_vec())
        } else {
            Ok(row.iter().map(|x| field.embed_constant(x)).collect::<Result<Vec<_>, _>>()?)
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6570_775f_7369_6e67);
    let mut checked = 0;
    for (pi, plane) in cfg.planes.iter().enumerate() {
        let basis: Vec<Vec<Scalar>> =
            (0..3).map(|r| lift(plane.mat().row(r))).collect::<Result<_, _>>()?;
        for s in 0..samples {
            let coeffs = loop {
                let c: Vec<Scalar> = (0..3).map(|_| field.rand_scalar(&mut rng)).collect();
                if c.iter().any(|x| !field.is_zero(x)) {
                    break c;
                }
            };
            let mut point = vec![field.zero(); 6];
            for (ci, row) in coeffs.iter().zip(&basis) {
                for (slot, x) in point.iter_mut().zip(row) {
                    *slot = field.add(slot, &field.mul(ci, x));
                }
            }
            if !field.is_zero(&sextic.eval(field, &point)) {
                return Err(EpwError::NotSingular { plane: pi, sample: s, what: "value".into() });
            }
            for (k, dp) in partials.iter().enumerate() {
                if !field.is_zero(&dp.eval(field, &point)) {
                    return Err(EpwError::NotSingular {
                        plane: pi,
                        sample: s,
                        what: format!("partial {k}"),
                    });
                }
            }
            checked += 1;
        }
    }
    let incidence = cfg.verify();
    let meet_point_coranks = incidence
        .meet_points
        .iter()
        .map(|(i, j, p)| (*i, *j, corank(a, p)))
        .collect();
    Ok(SingularSampleReport {
        planes: cfg.planes.len(),
        samples_per_plane: samples,
        checked,
        meet_point_coranks,
    })
}

#[derive(Clone, Debug)]
pub struct PlaneCurveReport {
    /// extension degree of the scanned point set over the input field
    pub level: usize,
    pub points_scanned: u128,
    /// plane coordinates of the points with corank at least two
    pub special_points: Vec<Vec<Scalar>>,
    /// dimension of ternary sextics through the special points, None when
    /// the locus is empty
    pub fit_dim: Option<usize>,
    /// the fitted curve when the system is one dimensional
    pub curve: Option<MultiPoly>,
}

/// Enumerates the rational points of a configured plane over the input field
/// or a quadratic extension of a prime input, keeps those of corank at least
/// two, and fits ternary sextics through them in plane coordinates.
pub fn plane_sextic_curve(
    a: &LagrangianSubspace,
    plane: &Plane,
    max_ext: usize,
    budget: u128,
) -> Result<PlaneCurveReport, EpwError> {
    assert!((1..=2).contains(&max_ext));
    let q0 = a
        .field
        .order()
        .ok_or_else(|| EpwError::Unsupported("plane scans need a finite field".into()))?;
    let level = if max_ext == 2 && a.field.degree() == 1 { 2 } else { 1 };
    let target = if level == 2 {
        FieldSpec::ext_field(a.field.characteristic(), 2, 0)?
    } else {
        a.field.clone()
    };
    let needed = proj_count(q0.pow(level as u32), 2);
    if needed > budget {
        return Err(EpwError::BudgetExceeded { needed, budget });
    }
    let rows = a.lifted_rows(&target)?;
    let basis: Vec<Vec<Scalar>> = (0..3)
        .map(|r| {
            plane
                .mat()
                .row(r)
                .iter()
                .map(|x| if target == a.field { Ok(x.clone()) } else { target.embed_constant(x) })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let special_points: Vec<Vec<Scalar>> =
        exec::map_ranges(u64::try_from(needed).expect("budget fits u64"), 4096, |lo, hi| {
            let mut out = Vec::new();
            for idx in lo..hi {
                let t = proj_point_from_index(&target, 2, idx as u128);
                let mut point = vec![target.zero(); 6];
                for (ci, row) in t.iter().zip(&basis) {
                    if target.is_zero(ci) {
                        continue;
                    }
                    for (slot, x) in point.iter_mut().zip(row) {
                        *slot = target.add(slot, &target.mul(ci, x));
                    }
                }
                if corank_in(&target, &rows, &point) >= 2 {
                    out.push(t);
                }
            }
            out
        });
    let (fit_dim, curve) = if special_points.is_empty() {
        (None, None)
    } else {
        let sys = hyper::through_points(&target, 3, 6, &special_points);
        let curve =
            if sys.dim() == 1 { Some(hyper::unique_form(&target, &sys)?) } else { None };
        (Some(sys.dim()), curve)
    };
    Ok(PlaneCurveReport { level, points_scanned: needed, special_points, fit_dim, curve })
}

#[derive(Clone, Debug)]
pub struct ThetaReport {
    pub scanned: u128,
    pub planes: Vec<Plane>,
}

/// Scans the projectivization of the subspace for decomposable vectors and
/// returns the planes they span, in enumeration order. The full point count
/// must fit the budget before any work starts.
pub fn theta_enumerate(a: &LagrangianSubspace, budget: u128) -> Result<ThetaReport, EpwError> {
    let q = a
        .field
        .order()
        .ok_or_else(|| EpwError::Unsupported("enumeration needs a finite field".into()))?;
    let needed = proj_count(q, 9);
    if needed > budget {
        return Err(EpwError::BudgetExceeded { needed, budget });
    }
    let total = u64::try_from(needed).expect("budget fits u64");
    let planes = if a.field.degree() == 1 {
        theta_scan_prime(a, total)?
    } else {
        theta_scan_generic(a, total)
    };
    Ok(ThetaReport { scanned: needed, planes })
}

fn combine_rows(field: &FieldSpec, rows: &ExactMatrix, t: &[Scalar]) -> Vec<Scalar> {
    let mut v = vec![field.zero(); 20];
    for (i, ti) in t.iter().enumerate() {
        if field.is_zero(ti) {
            continue;
        }
        for (slot, x) in v.iter_mut().zip(rows.row(i)) {
            *slot = field.add(slot, &field.mul(ti, x));
        }
    }
    v
}

fn theta_scan_generic(a: &LagrangianSubspace, total: u64) -> Vec<Plane> {
    let field = &a.field;
    exec::map_ranges(total, 4096, |lo, hi| {
        let mut out = Vec::new();
        for idx in lo..hi {
            let t = proj_point_from_index(field, 9, idx as u128);
            let v = combine_rows(field, &a.rows, &t);
            if let Decomposability::Plane(p) = is_decomposable(field, &v) {
                out.push(*p);
            }
        }
        out
    })
}

/// Mirror of the projective decode for raw prime residues.
fn decode_proj_u64(p: u64, n: usize, idx: u64, out: &mut [u64]) {
    let q = p as u128;
    let mut idx = idx as u128;
    for lead in 0..=n {
        let cell = q.pow((n - lead) as u32);
        if idx < cell {
            out.fill(0);
            out[lead] = 1;
            let mut v = idx;
            for slot in out.iter_mut().skip(lead + 1) {
                *slot = (v % q) as u64;
                v /= q;
            }
            return;
        }
        idx -= cell;
    }
    unreachable!("projective index out of range");
}

/// Rank of the 15 x 6 wedge action matrix, stopping as soon as it exceeds
/// three. Elimination is fraction free so no inverses are needed.
fn wedge_rank_bounded(m: &mut [[u64; 6]; 15], p: u64) -> usize {
    let mut rank = 0;
    let mut row = 0;
    for col in 0..6 {
        let Some(pr) = (row..15).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, pr);
        let pivot = m[row][col];
        for r in row + 1..15 {
            let f = m[r][col];
            if f == 0 {
                continue;
            }
            for cc in col..6 {
                let a = pivot * m[r][cc] % p;
                let b = f * m[row][cc] % p;
                m[r][cc] = (a + p - b) % p;
            }
        }
        rank += 1;
        row += 1;
        if rank > 3 {
            return rank;
        }
    }
    rank
}

fn theta_scan_prime(a: &LagrangianSubspace, total: u64) -> Result<Vec<Plane>, EpwError> {
    let field = &a.field;
    let p = field.characteristic();
    let mut rows = [[0u64; 20]; 10];
    for (i, row) in rows.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            *slot = field.as_prime_subfield(a.rows.get(i, c)).expect("prime field entry");
        }
    }
    // position and sign of each wedge action entry, fixed by the bases
    let mut action = [[None; 6]; 15];
    for (r, quad) in quads().iter().enumerate() {
        for (col, slot) in action[r].iter_mut().enumerate() {
            let a8 = col as u8;
            if !quad.contains(&a8) {
                continue;
            }
            let rest: Vec<u8> = quad.iter().copied().filter(|&x| x != a8).collect();
            let pos = quad.iter().position(|&x| x == a8).unwrap();
            *slot = Some((triple_index(&[rest[0], rest[1], rest[2]]), pos % 2 == 1));
        }
    }
    let hits: Vec<u64> = exec::map_ranges(total, 8192, |lo, hi| {
        let mut out = Vec::new();
        let mut t = [0u64; 10];
        let mut v = [0u64; 20];
        let mut m = [[0u64; 6]; 15];
        for idx in lo..hi {
            decode_proj_u64(p, 9, idx, &mut t);
            for (c, slot) in v.iter_mut().enumerate() {
                let mut acc: u128 = 0;
                for (ti, row) in t.iter().zip(&rows) {
                    acc += (*ti as u128) * (row[c] as u128);
                }
                *slot = (acc % p as u128) as u64;
            }
            for r in 0..15 {
                for col in 0..6 {
                    m[r][col] = match action[r][col] {
                        None => 0,
                        Some((ti, false)) => v[ti],
                        Some((ti, true)) => (p - v[ti]) % p,
                    };
                }
            }
            if wedge_rank_bounded(&mut m, p) == 3 {
                out.push(idx);
            }
        }
        out
    });
    hits.into_iter()
        .map(|idx| {
            let t = proj_point_from_index(field, 9, idx as u128);
            let v = combine_rows(field, &a.rows, &t);
            match is_decomposable(field, &v) {
                Decomposability::Plane(pl) => Ok(*pl),
                other => Err(EpwError::SelfCheck(format!(
                    "residue scan hit at index {idx} fails the exact test: {other:?}"
                ))),
            }
        })
        .collect()
}

/// Projective membership of a plane in a list.
pub fn contains_plane(field: &FieldSpec, list: &[Plane], plane: &Plane) -> bool {
    let target = plane.plucker_normalized(field);
    list.iter().any(|p| p.plucker_normalized(field) == target)
}

/// Whether s lies in the span of the pairwise products of the given cubics,
/// decided by comparing ranks inside the space of sextic monomials.
pub fn product_membership(field: &FieldSpec, s: &MultiPoly, cubics: &[MultiPoly]) -> bool {
    assert_eq!(s.n, 6);
    assert_eq!(s.d, 6);
    let monos = monomials(6, 6);
    let dense = |f: &MultiPoly| -> Vec<Scalar> {
        monos.iter().map(|e| f.coeff(e).cloned().unwrap_or_else(|| field.zero())).collect()
    };
    let mut rows = Vec::new();
    for (i, a) in cubics.iter().enumerate() {
        for b in &cubics[i..] {
            rows.push(dense(&a.mul(field, b)));
        }
    }
    let without = ExactMatrix::from_rows(rows.clone()).rank(field);
    rows.push(dense(s));
    let with = ExactMatrix::from_rows(rows).rank(field);
    without == with
}

/// Whether s is a nonzero scalar multiple of the e-th power of base.
pub fn is_scalar_power(field: &FieldSpec, s: &MultiPoly, base: &MultiPoly, e: usize) -> bool {
    if s.is_zero() || base.is_zero() {
        return s.is_zero() && base.is_zero();
    }
    s.normalize(field) == base.pow(field, e).normalize(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::triples;
    use crate::tens::construct_3331;

    fn unit_rows(field: &FieldSpec, keep: impl Fn(&[u8; 3]) -> bool) -> ExactMatrix {
        let mut rows = Vec::new();
        for (idx, t) in triples().iter().enumerate() {
            if keep(t) {
                let mut r = vec![field.zero(); 20];
                r[idx] = field.one();
                rows.push(r);
            }
        }
        ExactMatrix::from_rows(rows)
    }

    fn star_subspace(field: &FieldSpec, center: u8) -> LagrangianSubspace {
        LagrangianSubspace::new(field, &unit_rows(field, |t| t.contains(&center)), "star")
            .unwrap()
    }

    /// Triples meeting {0,1,2} in an even number of indices.
    fn parity_subspace(field: &FieldSpec) -> LagrangianSubspace {
        let keep = |t: &[u8; 3]| t.iter().filter(|&&x| x < 3).count() % 2 == 0;
        LagrangianSubspace::new(field, &unit_rows(field, keep), "parity").unwrap()
    }

    /// Rows e_T + w_T e_Tc over the triples containing 0; the pairing only
    /// couples complementary triples, so any weights give a Lagrangian.
    fn diagonal_subspace(field: &FieldSpec) -> LagrangianSubspace {
        let all = triples();
        let comp = |t: &[u8; 3]| -> usize {
            let rest: Vec<u8> = (0..6).filter(|x| !t.contains(x)).collect();
            triple_index(&[rest[0], rest[1], rest[2]])
        };
        let mut rows = Vec::new();
        let mut w = 1u64;
        for (idx, t) in all.iter().enumerate() {
            if !t.contains(&0) {
                continue;
            }
            let mut r = vec![field.zero(); 20];
            r[idx] = field.one();
            r[comp(t)] = field.from_u64(w);
            w = w % 4 + 1;
            rows.push(r);
        }
        LagrangianSubspace::new(field, &ExactMatrix::from_rows(rows), "diagonal").unwrap()
    }

    fn unit6(field: &FieldSpec, i: usize) -> Vec<Scalar> {
        let mut v = vec![field.zero(); 6];
        v[i] = field.one();
        v
    }

    #[test]
    fn star_coranks_match_hand_counts() {
        let f = FieldSpec::prime(7).unwrap();
        let a = star_subspace(&f, 1);
        // every product e_1 ^ e_a ^ e_b lies in the star again
        assert_eq!(corank(&a, &unit6(&f, 1)), 10);
        // products e_0 ^ e_a ^ e_b meet the star in the four triples 01x
        assert_eq!(corank(&a, &unit6(&f, 0)), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..25 {
            let v = random_point(&f, &mut rng);
            assert!(corank(&a, &v) >= 1);
        }
    }

    #[test]
    fn star_form_vanishes_on_every_chart() {
        let f = FieldSpec::prime(103).unwrap();
        let a = star_subspace(&f, 1);
        let rep = epw_form(&a, 5).unwrap();
        assert!(rep.sextic.is_none());
        assert_eq!(rep.chart, None);
        assert_eq!(rep.path, None);
    }

    #[test]
    fn subspace_basis_is_canonical_for_the_span() {
        let data = construct_3331(0).unwrap();
        let cfg = &data.config;
        let a1 = LagrangianSubspace::from_config(cfg).unwrap();
        let reversed: Vec<Vec<Scalar>> = cfg
            .planes
            .iter()
            .rev()
            .map(|p| p.plucker_normalized(&cfg.field))
            .collect();
        let a2 =
            LagrangianSubspace::new(&cfg.field, &ExactMatrix::from_rows(reversed), "r").unwrap();
        assert_eq!(a1.rows().rows_vec(), a2.rows().rows_vec());
    }

    #[test]
    fn three_conic_form_agrees_with_corank() {
        let data = construct_3331(0).unwrap();
        let cfg = &data.config;
        let f = &cfg.field;
        let a = LagrangianSubspace::from_config(cfg).unwrap();
        let rep = epw_form(&a, 11).unwrap();
        let q = rep.sextic.as_ref().expect("the locus is a genuine sextic");
        assert_eq!(rep.path, Some(FormPath::ExactDivision));
        assert!(rep.coefficients_in_base);
        assert_eq!(rep.cross_checked_charts, 5);
        assert_eq!(rep.checked_points, 100);
        assert_eq!((q.n, q.d), (6, 6));

        // vanishing of the sextic detects exactly the positive coranks
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut smooth = 0;
        for _ in 0..150 {
            let v = random_point(f, &mut rng);
            let k = corank(&a, &v);
            assert_eq!(k >= 1, f.is_zero(&q.eval(f, &v)));
            if k == 0 {
                smooth += 1;
            }
        }
        assert!(smooth > 100);

        // points of the configured planes are on the locus
        for plane in &cfg.planes {
            for t in 0..3 {
                let mut point = vec![f.zero(); 6];
                for (r, row) in (0..3).map(|r| plane.mat().row(r)).enumerate() {
                    let c = f.from_u64(1 + ((t + r) as u64 % 3));
                    for (slot, x) in point.iter_mut().zip(row) {
                        *slot = f.add(slot, &f.mul(&c, x));
                    }
                }
                assert!(f.is_zero(&q.eval(f, &point)));
                assert!(corank(&a, &point) >= 1);
            }
        }
    }

    #[test]
    fn three_conic_plane_samples_are_singular() {
        let data = construct_3331(0).unwrap();
        let cfg = &data.config;
        let a = LagrangianSubspace::from_config(cfg).unwrap();
        let form = epw_form(&a, 11).unwrap();
        let rep = singular_samples(&a, cfg, &form, 8, 17).unwrap();
        assert_eq!(rep.checked, 80);
        assert_eq!(rep.meet_point_coranks.len(), 45);
        for (_, _, k) in &rep.meet_point_coranks {
            assert!(*k >= 2);
        }
    }

    #[test]
    fn small_field_input_is_extended_and_mapped_back() {
        let f = FieldSpec::prime(5).unwrap();
        let a = diagonal_subspace(&f);
        let rep = epw_form(&a, 3).unwrap();
        let q = rep.sextic.as_ref().expect("the diagonal family is not degenerate");
        assert_eq!(rep.path, Some(FormPath::ExactDivision));
        assert!(rep.coefficients_in_base);
        assert_eq!(rep.field, f);
        assert_eq!((q.n, q.d), (6, 6));
        // coefficients computed upstairs in F_125 land back in the prime field,
        // and the equation still cuts out exactly the positive coranks
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut zero_seen = 0;
        for _ in 0..60 {
            let v = random_point(&f, &mut rng);
            let k = corank(&a, &v);
            assert_eq!(k >= 1, f.is_zero(&q.eval(&f, &v)));
            if k == 0 {
                zero_seen += 1;
            }
        }
        assert!(zero_seen > 0);
    }

    #[test]
    fn parity_family_is_identically_degenerate() {
        // for v = a + b split along the first and last three coordinates,
        // v ^ (a - b) ^ c with c in the low block lands in the even span,
        // so every point of projective space is degenerate
        let f = FieldSpec::prime(5).unwrap();
        let a = parity_subspace(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..40 {
            let v = random_point(&f, &mut rng);
            assert!(corank(&a, &v) >= 1);
        }
        let rep = epw_form(&a, 3).unwrap();
        assert!(rep.sextic.is_none());
        assert_eq!(rep.chart, None);
    }

    #[test]
    fn parity_plane_is_special_everywhere() {
        let f = FieldSpec::prime(5).unwrap();
        let a = parity_subspace(&f);
        let plane = Plane::new(
            &f,
            ExactMatrix::from_rows(vec![unit6(&f, 3), unit6(&f, 4), unit6(&f, 5)]),
        )
        .unwrap();
        let rep = plane_sextic_curve(&a, &plane, 2, 1000).unwrap();
        assert_eq!(rep.level, 2);
        assert_eq!(rep.points_scanned, 651);
        // v ^ e_0 ^ e_1 and the Pluecker vector of the plane itself are two
        // independent members at every point, so everything is special
        assert_eq!(rep.special_points.len(), 651);
        // no nonzero ternary sextic vanishes on all of the plane over F_25
        assert_eq!(rep.fit_dim, Some(0));
        assert!(rep.curve.is_none());
        assert!(matches!(
            plane_sextic_curve(&a, &plane, 2, 100),
            Err(EpwError::BudgetExceeded { needed: 651, .. })
        ));
    }

    #[test]
    fn theta_scan_counts_planes_through_the_marked_point() {
        let f = FieldSpec::prime(3).unwrap();
        let a = star_subspace(&f, 1);
        let rep = theta_enumerate(&a, 30_000).unwrap();
        assert_eq!(rep.scanned, 29_524);
        // members are e_1 wedge a decomposable two form on the complement,
        // counted by the Gaussian binomial for lines in four space
        let gauss = (3u64.pow(5) - 1) * (3u64.pow(4) - 1) / ((3 - 1) * (3u64.pow(2) - 1));
        assert_eq!(rep.planes.len() as u64, gauss);
        for p in &rep.planes {
            let pl = p.plucker_normalized(&f);
            for (idx, t) in triples().iter().enumerate() {
                if !t.contains(&1) {
                    assert!(f.is_zero(&pl[idx]));
                }
            }
        }
        // the residue shortcut must agree with the generic scan
        let direct = theta_scan_generic(&a, 29_524);
        assert_eq!(direct.len(), rep.planes.len());
        for (x, y) in direct.iter().zip(&rep.planes) {
            assert_eq!(x.plucker_normalized(&f), y.plucker_normalized(&f));
        }
    }

    #[test]
    fn theta_budget_is_checked_before_scanning() {
        let f = FieldSpec::prime(5).unwrap();
        let a = star_subspace(&f, 1);
        match theta_enumerate(&a, 1000) {
            Err(EpwError::BudgetExceeded { needed, budget }) => {
                assert_eq!(needed, 2_441_406);
                assert_eq!(budget, 1000);
            }
            other => panic!("expected a budget error, got {other:?}"),
        }
    }

    #[test]
    fn product_span_membership_accepts_products_and_rejects_outsiders() {
        let f = FieldSpec::prime(11).unwrap();
        let mono = |e: [u8; 6]| MultiPoly::monomial(6, &e, f.one(), &f);
        let cubics = vec![
            mono([3, 0, 0, 0, 0, 0]),
            mono([2, 1, 0, 0, 0, 0]),
            mono([1, 1, 1, 0, 0, 0]),
            mono([0, 1, 1, 1, 0, 0]),
        ];
        let inside = cubics[0].mul(&f, &cubics[2]).scale(&f, &f.from_u64(7));
        assert!(product_membership(&f, &inside, &cubics));
        let outside = mono([0, 0, 0, 0, 0, 6]);
        assert!(!product_membership(&f, &outside, &cubics));
        let crossing = mono([5, 0, 0, 0, 1, 0]);
        assert!(!product_membership(&f, &crossing, &cubics));
    }

    #[test]
    fn scalar_power_comparison_ignores_scale() {
        let f = FieldSpec::prime(13).unwrap();
        let quad = MultiPoly::from_terms(
            6,
            2,
            &f,
            vec![
                (vec![2, 0, 0, 0, 0, 0], f.one()),
                (vec![0, 1, 1, 0, 0, 0], f.from_u64(3)),
            ],
        )
        .unwrap();
        let cube = quad.pow(&f, 3).scale(&f, &f.from_u64(5));
        assert!(is_scalar_power(&f, &cube, &quad, 3));
        let spoiled = cube.add(&f, &MultiPoly::monomial(6, &[6, 0, 0, 0, 0, 0], f.one(), &f));
        assert!(!is_scalar_power(&f, &spoiled, &quad, 3));
    }
}
