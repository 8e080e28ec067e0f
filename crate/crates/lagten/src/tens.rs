//! Configurations of pairwise incident planes in P^5 and their constructions.
//!
//! A configuration, or "ten" (most have ten members, some more), is a list of
//! planes over a fixed field together with provenance. [`TenConfig::verify`]
//! checks every pair for incidence, collects the zero dimensional meeting
//! points, and measures the span of the Pluecker images inside the twenty
//! dimensional wedge space.
//!
//! Three constructions are provided. `construct_3331` builds the ten from a
//! fixed triple of conics over F_29 whose pairwise intersections contain
//! designated coordinate points; ruling lines of three quadric surfaces over
//! the quadratic extension supply the planes. `construct_morin13` builds a
//! thirteen plane configuration from three random conics over a small prime
//! field using tangent planes of the associated quadrics. `ruling_ten` draws
//! ten members of the classical congruence {u ^ w : w in k^4} on a small field.

use crate::exec;
use crate::field::{FieldError, FieldSpec, Scalar};
use crate::grassmann::{
    chart_matrix, intersection_point, meet_dim, pairing, projective_normalize, Chart,
    GrassmannError, Plane,
};
use crate::jsonio::{self, JsonError};
use crate::matrix::{ExactMatrix, LinearError};
use crate::poly::MultiPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TenError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("no coordinate chart covers all planes after {0} coordinate changes")]
    NoChart(u32),
}

#[derive(Clone, Debug)]
pub struct Provenance {
    pub recipe: String,
    pub seed: u64,
    pub source: String,
}

#[derive(Clone, Debug)]
pub struct TenConfig {
    pub field: FieldSpec,
    pub planes: Vec<Plane>,
    pub provenance: Provenance,
}

/// Everything `verify` learns about a configuration.
#[derive(Clone, Debug)]
pub struct IncidenceReport {
    pub n: usize,
    /// projective dimension of the pairwise meets; diagonal entries are 2
    pub dims: Vec<Vec<i64>>,
    pub all_incident: bool,
    /// (i, j, point) for each pair meeting in a single point
    pub meet_points: Vec<(usize, usize, Vec<Scalar>)>,
    pub points_distinct: bool,
    pub planes_distinct: bool,
    /// rank of the stacked Pluecker vectors
    pub span_dim: usize,
    /// all pairwise wedge pairings vanish
    pub isotropic: bool,
    pub lagrangian_spanning: bool,
}

pub fn format_point(field: &FieldSpec, p: &[Scalar]) -> String {
    let n = projective_normalize(field, p);
    n.iter().map(|s| field.format(s)).collect::<Vec<_>>().join(",")
}

fn pair_from_index(n: usize, t: u64) -> (usize, usize) {
    let mut t = t as usize;
    let mut i = 0;
    let mut row = n - 1;
    while t >= row {
        t -= row;
        i += 1;
        row -= 1;
    }
    (i, i + 1 + t)
}

impl TenConfig {
    pub fn n(&self) -> usize {
        self.planes.len()
    }

    pub fn verify(&self) -> IncidenceReport {
        let n = self.planes.len();
        let field = &self.field;
        let total = (n * (n - 1) / 2) as u64;
        let results = exec::map_ranges(total, 8, |lo, hi| {
            (lo..hi)
                .map(|t| {
                    let (i, j) = pair_from_index(n, t);
                    let a = &self.planes[i];
                    let b = &self.planes[j];
                    let d = meet_dim(field, a, b);
                    let pt = if d == 0 {
                        intersection_point(field, a, b)
                    } else {
                        None
                    };
                    let pr = pairing(field, a.plucker_raw(), b.plucker_raw());
                    (i, j, d, pt, field.is_zero(&pr))
                })
                .collect()
        });
        let mut dims = vec![vec![0i64; n]; n];
        for (r, row) in dims.iter_mut().enumerate() {
            row[r] = 2;
        }
        let mut meet_points = vec![];
        let mut all_incident = true;
        let mut isotropic = true;
        for (i, j, d, pt, pzero) in results {
            dims[i][j] = d;
            dims[j][i] = d;
            if d < 0 {
                all_incident = false;
            }
            if !pzero {
                isotropic = false;
            }
            if let Some(p) = pt {
                meet_points.push((i, j, p));
            }
        }
        let points_distinct = {
            let set: BTreeSet<String> = meet_points
                .iter()
                .map(|(_, _, p)| format_point(field, p))
                .collect();
            set.len() == meet_points.len()
        };
        let planes_distinct = {
            let set: BTreeSet<String> = self
                .planes
                .iter()
                .map(|p| format_point(field, p.plucker_raw()))
                .collect();
            set.len() == n
        };
        let span = ExactMatrix::from_rows(
            self.planes.iter().map(|p| p.plucker_raw().to_vec()).collect(),
        );
        let span_dim = span.rank(field);
        let lagrangian_spanning = all_incident && isotropic && span_dim == 10;
        IncidenceReport {
            n,
            dims,
            all_incident,
            meet_points,
            points_distinct,
            planes_distinct,
            span_dim,
            isotropic,
            lagrangian_spanning,
        }
    }

    /// Replaces every plane by its annihilator under the dual pairing.
    /// Meeting dimensions are preserved.
    pub fn dualize(&self) -> TenConfig {
        TenConfig {
            field: self.field.clone(),
            planes: self.planes.iter().map(|p| p.dual(&self.field)).collect(),
            provenance: Provenance {
                recipe: self.provenance.recipe.clone(),
                seed: self.provenance.seed,
                source: format!("{}|dual", self.provenance.source),
            },
        }
    }

    /// Applies an invertible coordinate change on row vectors.
    pub fn transform(&self, g: &ExactMatrix) -> Result<TenConfig, TenError> {
        let planes = self
            .planes
            .iter()
            .map(|p| Plane::new(&self.field, p.mat().mul(&self.field, g)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TenConfig {
            field: self.field.clone(),
            planes,
            provenance: Provenance {
                recipe: self.provenance.recipe.clone(),
                seed: self.provenance.seed,
                source: format!("{}|transformed", self.provenance.source),
            },
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": jsonio::field_to_json(&self.field),
            "planes": self.planes.iter()
                .map(|p| jsonio::plane_rows_to_json(&self.field, p))
                .collect::<Vec<_>>(),
            "provenance": {
                "recipe": self.provenance.recipe,
                "seed": self.provenance.seed,
                "source": self.provenance.source,
            },
        })
    }

    pub fn from_json(v: &Value) -> Result<TenConfig, JsonError> {
        let field = jsonio::field_from_json(v.get("field").ok_or(JsonError::Missing("field"))?)?;
        let planes = v
            .get("planes")
            .ok_or(JsonError::Missing("planes"))?
            .as_array()
            .ok_or(JsonError::Bad("planes"))?
            .iter()
            .map(|p| jsonio::plane_rows_from_json(&field, p))
            .collect::<Result<Vec<_>, _>>()?;
        let provenance = match v.get("provenance") {
            Some(p) => Provenance {
                recipe: p
                    .get("recipe")
                    .and_then(|x| x.as_str())
                    .unwrap_or("imported")
                    .to_string(),
                seed: p.get("seed").and_then(|x| x.as_u64()).unwrap_or(0),
                source: p
                    .get("source")
                    .and_then(|x| x.as_str())
                    .unwrap_or("imported")
                    .to_string(),
            },
            None => Provenance {
                recipe: "imported".into(),
                seed: 0,
                source: "imported".into(),
            },
        };
        Ok(TenConfig { field, planes, provenance })
    }
}

impl IncidenceReport {
    pub fn to_json(&self, field: &FieldSpec) -> Value {
        json!({
            "n": self.n,
            "dims": self.dims,
            "all_incident": self.all_incident,
            "meet_points": self.meet_points.iter().map(|(i, j, p)| json!({
                "pair": [i, j],
                "point": jsonio::scalar_row_to_json(field, p),
            })).collect::<Vec<_>>(),
            "points_distinct": self.points_distinct,
            "planes_distinct": self.planes_distinct,
            "span_dim": self.span_dim,
            "isotropic": self.isotropic,
            "lagrangian_spanning": self.lagrangian_spanning,
        })
    }
}

/// Outcome of the first order incidence analysis around a configuration.
#[derive(Clone, Debug)]
pub struct TangentReport {
    pub chart: Chart,
    pub coordinate_changes: u32,
    pub rank: usize,
    pub parameter_count: usize,
    pub tangent_dim: usize,
}

fn tangent_system_rank(
    field: &FieldSpec,
    mats: &[ExactMatrix],
) -> Result<(usize, usize), TenError> {
    let n = mats.len();
    let cols = 9 * n;
    let mut rows = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let diff = mats[i].sub(field, &mats[j]);
            let adj = diff.adjugate(field)?;
            let mut row = vec![field.zero(); cols];
            for a in 0..3 {
                for b in 0..3 {
                    // d/dX det(diff + X) in the (a,b) slot is adj(diff)[b][a]
                    row[9 * i + 3 * a + b] = adj.get(b, a).clone();
                    row[9 * j + 3 * a + b] = field.neg(adj.get(b, a));
                }
            }
            rows.push(row);
        }
    }
    let m = ExactMatrix::from_rows(rows);
    Ok((m.rank(field), cols))
}

/// Rank of the linearized incidence system in a single fixed chart, when all
/// planes are graphs over it.
pub fn tangent_rank_in_chart(
    config: &TenConfig,
    chart: Chart,
) -> Option<(usize, usize)> {
    let field = &config.field;
    let mats = config
        .planes
        .iter()
        .map(|p| chart_matrix(field, p, chart).ok())
        .collect::<Option<Vec<_>>>()?;
    tangent_system_rank(field, &mats).ok()
}

fn random_gl6(field: &FieldSpec, rng: &mut ChaCha8Rng) -> ExactMatrix {
    loop {
        let g = ExactMatrix::from_fn(6, 6, |_, _| field.rand_scalar(rng));
        if g.rank(field) == 6 {
            return g;
        }
    }
}

/// Linearizes all pairwise incidence conditions around the configuration.
///
/// Every plane is written as a graph over one common chart, giving nine
/// parameters per plane; each pair contributes the derivative of the
/// determinant of the difference of chart matrices. The rank does not depend
/// on the chart, so if no chart covers all planes a seeded random coordinate
/// change is applied first.
pub fn tangent_rank(config: &TenConfig, seed: u64) -> Result<TangentReport, TenError> {
    let field = &config.field;
    let mut current = config.planes.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x74616e_67);
    for attempt in 0..32u32 {
        for chart in Chart::all() {
            let mats = current
                .iter()
                .map(|p| chart_matrix(field, p, chart).ok())
                .collect::<Option<Vec<_>>>();
            if let Some(mats) = mats {
                let (rank, parameter_count) = tangent_system_rank(field, &mats)?;
                return Ok(TangentReport {
                    chart,
                    coordinate_changes: attempt,
                    rank,
                    parameter_count,
                    tangent_dim: parameter_count - rank,
                });
            }
        }
        let g = random_gl6(field, &mut rng);
        current = current
            .iter()
            .map(|p| Plane::new(field, p.mat().mul(field, &g)))
            .collect::<Result<Vec<_>, _>>()?;
    }
    Err(TenError::NoChart(32))
}

// ---- projective enumeration ----

/// Number of points of P^n over a field with q elements.
pub fn proj_count(q: u128, n: usize) -> u128 {
    (0..=n).map(|d| q.pow(d as u32)).sum()
}

/// Decodes an index into a point of P^n, leading coordinate one. Indexes run
/// through the affine cells from the largest down to the single point
/// (0, .., 0, 1).
pub fn proj_point_from_index(field: &FieldSpec, n: usize, idx: u128) -> Vec<Scalar> {
    let q = field.order().expect("finite field required");
    let mut idx = idx;
    for lead in 0..=n {
        let cell = q.pow((n - lead) as u32);
        if idx < cell {
            let mut pt = vec![field.zero(); n + 1];
            pt[lead] = field.one();
            let mut v = idx;
            for slot in pt.iter_mut().skip(lead + 1) {
                *slot = field.element_from_index((v % q) as u64);
                v /= q;
            }
            return pt;
        }
        idx -= cell;
    }
    panic!("projective index out of range");
}

/// All common zeros of two ternary quadratics in P^2, in enumeration order.
pub fn conic_intersection(field: &FieldSpec, a: &MultiPoly, b: &MultiPoly) -> Vec<Vec<Scalar>> {
    let q = field.order().expect("finite field required");
    let total = proj_count(q, 2);
    let total64 = u64::try_from(total).expect("field too large for a plane scan");
    exec::map_ranges(total64, 4096, |lo, hi| {
        (lo..hi)
            .filter_map(|t| {
                let p = proj_point_from_index(field, 2, t as u128);
                if field.is_zero(&a.eval(field, &p)) && field.is_zero(&b.eval(field, &p)) {
                    Some(p)
                } else {
                    None
                }
            })
            .collect()
    })
}

// ---- quadratic form helpers ----

/// Symmetric matrix of a quadratic form; requires odd characteristic or zero.
pub fn sym_matrix_of_quadratic(field: &FieldSpec, f: &MultiPoly) -> ExactMatrix {
    assert_eq!(f.d, 2);
    let n = f.n;
    let half = field
        .inv(&field.from_i64(2))
        .expect("characteristic two not supported here");
    ExactMatrix::from_fn(n, n, |i, j| {
        let mut exp = vec![0u8; n];
        exp[i] += 1;
        exp[j] += 1;
        let c = f.coeff(&exp).cloned().unwrap_or_else(|| field.zero());
        if i == j {
            c
        } else {
            field.mul(&c, &half)
        }
    })
}

pub fn conic_is_smooth(field: &FieldSpec, c: &MultiPoly) -> bool {
    let m = sym_matrix_of_quadratic(field, c);
    !field.is_zero(&m.det(field).expect("square"))
}

fn dot(field: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        acc = field.add(&acc, &field.mul(x, y));
    }
    acc
}

pub fn quadratic_eval(field: &FieldSpec, m: &ExactMatrix, v: &[Scalar]) -> Scalar {
    let mv = m.matvec(field, v);
    dot(field, v, &mv)
}

/// 4x4 matrix of C(x0,x1,x2) + x3^2 for a ternary conic C.
pub fn quadric_matrix(field: &FieldSpec, conic: &MultiPoly) -> ExactMatrix {
    let c3 = sym_matrix_of_quadratic(field, conic);
    ExactMatrix::from_fn(4, 4, |i, j| {
        if i < 3 && j < 3 {
            c3.get(i, j).clone()
        } else if i == 3 && j == 3 {
            field.one()
        } else {
            field.zero()
        }
    })
}

/// Two directions completing q to a basis of the embedded tangent space of
/// the quadric at the smooth point q.
pub fn tangent_complement(field: &FieldSpec, m: &ExactMatrix, q: &[Scalar]) -> Vec<Vec<Scalar>> {
    let normal = m.matvec(field, q);
    let row = ExactMatrix::from_rows(vec![normal]);
    let ker = row.kernel(field);
    let mut kept: Vec<Vec<Scalar>> = vec![q.to_vec()];
    let mut out = vec![];
    for c in 0..ker.ncols() {
        let cand: Vec<Scalar> = (0..ker.nrows()).map(|r| ker.get(r, c).clone()).collect();
        let mut probe = kept.clone();
        probe.push(cand.clone());
        if ExactMatrix::from_rows(probe).rank(field) == kept.len() + 1 {
            kept.push(cand.clone());
            out.push(cand);
            if out.len() == 2 {
                break;
            }
        }
    }
    out
}

/// Directions of the lines on the quadric through the smooth point q,
/// found by enumerating the pencil inside the tangent space. A field
/// containing the square root of the discriminant sees exactly two.
pub fn ruling_directions(field: &FieldSpec, m: &ExactMatrix, q: &[Scalar]) -> Vec<Vec<Scalar>> {
    let basis = tangent_complement(field, m, q);
    assert_eq!(basis.len(), 2, "point must be smooth on the quadric");
    let order = field.order().expect("finite field required");
    let count = u64::try_from(order).expect("field too large for a pencil scan");
    let mut dirs = vec![];
    for t in 0..=count {
        let (s0, s1) = if t < count {
            (field.one(), field.element_from_index(t))
        } else {
            (field.zero(), field.one())
        };
        let d: Vec<Scalar> = (0..4)
            .map(|c| {
                field.add(
                    &field.mul(&s0, &basis[0][c]),
                    &field.mul(&s1, &basis[1][c]),
                )
            })
            .collect();
        if field.is_zero(&quadratic_eval(field, m, &d)) {
            dirs.push(d);
        }
    }
    dirs
}

/// Two distinct lines on a smooth quadric surface belong to the same ruling
/// exactly when they are equal or disjoint. Lines are 2x4 span matrices.
pub fn same_ruling(field: &FieldSpec, l1: &ExactMatrix, l2: &ExactMatrix) -> bool {
    let r = ExactMatrix::stack_vertical(&[l1, l2]).rank(field);
    r == 2 || r == 4
}

// ---- embeddings ----

fn unit(field: &FieldSpec, len: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); len];
    v[i] = field.one();
    v
}

/// Places P^3 coordinates (x0, x1, x2, y) into P^5 with y at slot 3 + axis.
pub fn pi_embed(field: &FieldSpec, v4: &[Scalar], axis: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); 6];
    v[0] = v4[0].clone();
    v[1] = v4[1].clone();
    v[2] = v4[2].clone();
    v[3 + axis] = v4[3].clone();
    v
}

/// The coordinate plane spanned by e_0, e_1, e_2.
pub fn lambda_plane(field: &FieldSpec) -> Plane {
    Plane::from_rows(
        field,
        vec![unit(field, 6, 0), unit(field, 6, 1), unit(field, 6, 2)],
    )
    .expect("coordinate plane")
}

pub fn point_in_lambda(field: &FieldSpec, p: &[Scalar]) -> bool {
    (3..6).all(|c| field.is_zero(&p[c]))
}

/// True when p lies in the span of Lambda and e_{3+axis} and satisfies the
/// quadric with the given 4x4 matrix there.
pub fn point_on_embedded_quadric(
    field: &FieldSpec,
    m4: &ExactMatrix,
    axis: usize,
    p: &[Scalar],
) -> bool {
    for j in 0..3 {
        if j != axis && !field.is_zero(&p[3 + j]) {
            return false;
        }
    }
    let v4 = vec![p[0].clone(), p[1].clone(), p[2].clone(), p[3 + axis].clone()];
    field.is_zero(&quadratic_eval(field, m4, &v4))
}

/// Lifts a polynomial with prime subfield coefficients into a larger field.
pub fn lift_poly(dst: &FieldSpec, f: &MultiPoly) -> MultiPoly {
    MultiPoly::from_terms(
        f.n,
        f.d,
        dst,
        f.terms.iter().map(|(e, c)| {
            (
                e.clone(),
                dst.embed_constant(c).expect("prime subfield coefficient"),
            )
        }),
    )
    .expect("shape preserved")
}

fn other_two(m: usize) -> (usize, usize) {
    match m {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => unreachable!(),
    }
}

// ---- the three conic construction over F_29 ----

/// The fixed triple of conics over F_29. Their pairwise intersections each
/// consist of four rational points, one of which is a coordinate point.
pub fn three_conics_29(field: &FieldSpec) -> [MultiPoly; 3] {
    assert_eq!(field.characteristic(), 29);
    let mk = |items: Vec<(Vec<u8>, i64)>| {
        MultiPoly::from_terms(
            3,
            2,
            field,
            items.into_iter().map(|(e, c)| (e, field.from_i64(c))),
        )
        .expect("conic data")
    };
    [
        mk(vec![
            (vec![2, 0, 0], 1),
            (vec![1, 0, 1], -7),
            (vec![0, 1, 1], -12),
        ]),
        mk(vec![
            (vec![1, 1, 0], -4),
            (vec![0, 2, 0], 9),
            (vec![1, 0, 1], -5),
            (vec![0, 1, 1], -10),
        ]),
        mk(vec![
            (vec![1, 1, 0], 6),
            (vec![1, 0, 1], -14),
            (vec![0, 1, 1], 10),
            (vec![0, 0, 2], 1),
        ]),
    ]
}

#[derive(Debug)]
pub struct ThreeConicData {
    pub base: FieldSpec,
    pub ext: FieldSpec,
    pub conics: [MultiPoly; 3],
    /// slot m: full intersection of the two conics other than C_m
    pub pair_points: [Vec<Vec<Scalar>>; 3],
    /// slot m: the same with the coordinate point e_m removed
    pub e_sets: [Vec<Vec<Scalar>>; 3],
    /// 4x4 matrices over the extension
    pub quadric_mats: [ExactMatrix; 3],
    /// which of the eight ruling assignments produced the configuration
    pub combo: u8,
    pub config: TenConfig,
}

struct RulingRefs {
    /// reference lines for labels 0 and 1, one pair per quadric
    lines: [[ExactMatrix; 2]; 3],
}

fn line_span(q: &[Scalar], d: &[Scalar]) -> ExactMatrix {
    ExactMatrix::from_rows(vec![q.to_vec(), d.to_vec()])
}

fn label_direction(
    field: &FieldSpec,
    refs: &RulingRefs,
    quadric: usize,
    q: &[Scalar],
    d: &[Scalar],
) -> Result<usize, TenError> {
    let l = line_span(q, d);
    let zero = same_ruling(field, &l, &refs.lines[quadric][0]);
    let one = same_ruling(field, &l, &refs.lines[quadric][1]);
    match (zero, one) {
        (true, false) => Ok(0),
        (false, true) => Ok(1),
        _ => Err(TenError::Construction(format!(
            "ruling label ambiguous on quadric {quadric}"
        ))),
    }
}

pub fn construct_3331(seed: u64) -> Result<ThreeConicData, TenError> {
    let base = FieldSpec::prime(29)?;
    let conics = three_conics_29(&base);
    for (i, c) in conics.iter().enumerate() {
        if !conic_is_smooth(&base, c) {
            return Err(TenError::Construction(format!("conic {i} is singular")));
        }
    }

    let mut pair_points: [Vec<Vec<Scalar>>; 3] = Default::default();
    let mut e_sets: [Vec<Vec<Scalar>>; 3] = Default::default();
    for m in 0..3 {
        let (i, j) = other_two(m);
        let pts = conic_intersection(&base, &conics[i], &conics[j]);
        if pts.len() != 4 {
            return Err(TenError::Construction(format!(
                "pair {m}: found {} intersection points, need 4",
                pts.len()
            )));
        }
        let em = unit(&base, 3, m);
        let reduced: Vec<_> = pts.iter().filter(|p| **p != em).cloned().collect();
        if reduced.len() != 3 {
            return Err(TenError::Construction(format!(
                "pair {m}: coordinate point e_{m} not among the intersections"
            )));
        }
        pair_points[m] = pts;
        e_sets[m] = reduced;
    }

    let ext = FieldSpec::ext_field(29, 2, seed)?;
    let conics_ext: Vec<MultiPoly> = conics.iter().map(|c| lift_poly(&ext, c)).collect();
    let quadric_mats = [
        quadric_matrix(&ext, &conics_ext[0]),
        quadric_matrix(&ext, &conics_ext[1]),
        quadric_matrix(&ext, &conics_ext[2]),
    ];

    let lift4 = |p: &[Scalar]| -> Vec<Scalar> {
        let mut v: Vec<Scalar> = p
            .iter()
            .map(|c| ext.embed_constant(c).expect("base point"))
            .collect();
        v.push(ext.zero());
        v
    };

    // reference ruling lines: per quadric, at the first point of its first pair
    let mut ref_lines = vec![];
    for quadric in 0..3 {
        let first_pair = (0..3).find(|&m| m != quadric).unwrap();
        let q4 = lift4(&e_sets[first_pair][0]);
        let dirs = ruling_directions(&ext, &quadric_mats[quadric], &q4);
        if dirs.len() != 2 {
            return Err(TenError::Construction(format!(
                "quadric {quadric}: {} ruling directions at the reference point",
                dirs.len()
            )));
        }
        ref_lines.push([line_span(&q4, &dirs[0]), line_span(&q4, &dirs[1])]);
    }
    let refs = RulingRefs {
        lines: [
            [ref_lines[0][0].clone(), ref_lines[0][1].clone()],
            [ref_lines[1][0].clone(), ref_lines[1][1].clone()],
            [ref_lines[2][0].clone(), ref_lines[2][1].clone()],
        ],
    };

    // labelled ruling directions for every E point on each of its two quadrics:
    // dirs_by_label[m][t][side][label], side 0 the smaller quadric index
    let mut dirs_by_label: Vec<Vec<[[Vec<Scalar>; 2]; 2]>> = vec![];
    for m in 0..3 {
        let (i, j) = other_two(m);
        let mut per_point = vec![];
        for q in &e_sets[m] {
            let q4 = lift4(q);
            let mut sides: Vec<[Vec<Scalar>; 2]> = vec![];
            for &quadric in &[i, j] {
                let dirs = ruling_directions(&ext, &quadric_mats[quadric], &q4);
                if dirs.len() != 2 {
                    return Err(TenError::Construction(format!(
                        "quadric {quadric}: expected two ruling directions"
                    )));
                }
                let l0 = label_direction(&ext, &refs, quadric, &q4, &dirs[0])?;
                let l1 = label_direction(&ext, &refs, quadric, &q4, &dirs[1])?;
                if l0 == l1 {
                    return Err(TenError::Construction(format!(
                        "quadric {quadric}: both directions took label {l0}"
                    )));
                }
                let mut slot = [dirs[0].clone(), dirs[1].clone()];
                if l0 == 1 {
                    slot.swap(0, 1);
                }
                sides.push(slot);
            }
            per_point.push([sides[0].clone(), sides[1].clone()]);
        }
        dirs_by_label.push(per_point);
    }

    // eight assignments: bit b_i fixes which ruling quadric i uses in its
    // first pair; the second pair takes the opposite one
    for combo in 0..8u8 {
        let choose = |quadric: usize, m: usize| -> usize {
            let first_pair = (0..3).find(|&x| x != quadric).unwrap();
            let bit = ((combo >> quadric) & 1) as usize;
            if m == first_pair {
                bit
            } else {
                1 - bit
            }
        };
        let mut planes = vec![lambda_plane(&ext)];
        let mut ok = true;
        'pairs: for m in 0..3 {
            let (i, j) = other_two(m);
            for (t, q) in e_sets[m].iter().enumerate() {
                let q6 = {
                    let mut v: Vec<Scalar> = q
                        .iter()
                        .map(|c| ext.embed_constant(c).expect("base point"))
                        .collect();
                    v.extend(std::iter::repeat_with(|| ext.zero()).take(3));
                    v
                };
                let di = &dirs_by_label[m][t][0][choose(i, m)];
                let dj = &dirs_by_label[m][t][1][choose(j, m)];
                let rows = vec![q6, pi_embed(&ext, di, i), pi_embed(&ext, dj, j)];
                match Plane::from_rows(&ext, rows) {
                    Ok(p) => planes.push(p),
                    Err(_) => {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        let config = TenConfig {
            field: ext.clone(),
            planes,
            provenance: Provenance {
                recipe: "3331".into(),
                seed,
                source: "constructed".into(),
            },
        };
        let rep = config.verify();
        let all_zero_dim = (0..10).all(|i| {
            (i + 1..10).all(|j| rep.dims[i][j] == 0)
        });
        if rep.all_incident
            && rep.isotropic
            && rep.span_dim == 10
            && rep.planes_distinct
            && rep.points_distinct
            && all_zero_dim
        {
            return Ok(ThreeConicData {
                base,
                ext,
                conics,
                pair_points,
                e_sets,
                quadric_mats,
                combo,
                config,
            });
        }
    }
    Err(TenError::Construction(
        "no ruling assignment produced a fully incident configuration".into(),
    ))
}

// ---- the thirteen plane construction ----

#[derive(Debug)]
pub struct Morin13Data {
    pub base: FieldSpec,
    pub ext: FieldSpec,
    pub conics: [MultiPoly; 3],
    /// slot m: the four points of C_m meet C_{m+1}, over the extension
    pub pair_points: [Vec<Vec<Scalar>>; 3],
    pub quadric_mats: [ExactMatrix; 3],
    pub attempts: u32,
    pub config: TenConfig,
}

pub fn construct_morin13(seed: u64, p: u64) -> Result<Morin13Data, TenError> {
    let base = FieldSpec::prime(p)?;
    let ext = FieldSpec::ext_field(p, 2, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d6f_7269_6e31_3301);
    let monos = crate::poly::monomials(3, 2);
    for attempt in 1..=2000u32 {
        let mut conics = vec![];
        for _ in 0..3 {
            let terms: Vec<(Vec<u8>, Scalar)> = monos
                .iter()
                .map(|e| (e.clone(), base.rand_scalar(&mut rng)))
                .collect();
            conics.push(MultiPoly::from_terms(3, 2, &base, terms).expect("conic"));
        }
        if conics.iter().any(|c| c.is_zero() || !conic_is_smooth(&base, c)) {
            continue;
        }
        let lifted: Vec<MultiPoly> = conics.iter().map(|c| lift_poly(&ext, c)).collect();
        // cyclic pairs: slot m holds C_m meet C_{m+1}, served by quadric Q_m,
        // so each projective 3-space carries four of the twelve planes
        let mut pair_points: [Vec<Vec<Scalar>>; 3] = Default::default();
        let mut ok = true;
        for m in 0..3 {
            let pts = conic_intersection(&ext, &lifted[m], &lifted[(m + 1) % 3]);
            if pts.len() != 4 {
                ok = false;
                break;
            }
            pair_points[m] = pts;
        }
        if !ok {
            continue;
        }
        let quadric_mats = [
            quadric_matrix(&ext, &lifted[0]),
            quadric_matrix(&ext, &lifted[1]),
            quadric_matrix(&ext, &lifted[2]),
        ];
        let mut planes = vec![lambda_plane(&ext)];
        let mut built = true;
        'outer: for (i, points) in pair_points.iter().enumerate() {
            for q in points {
                let q4 = vec![q[0].clone(), q[1].clone(), q[2].clone(), ext.zero()];
                // tangent plane of the pair's own quadric at q
                let normal = quadric_mats[i].matvec(&ext, &q4);
                let ker = ExactMatrix::from_rows(vec![normal]).kernel(&ext);
                if ker.ncols() != 3 {
                    built = false;
                    break 'outer;
                }
                let rows: Vec<Vec<Scalar>> = (0..3)
                    .map(|c| {
                        let col: Vec<Scalar> =
                            (0..4).map(|r| ker.get(r, c).clone()).collect();
                        pi_embed(&ext, &col, i)
                    })
                    .collect();
                match Plane::from_rows(&ext, rows) {
                    Ok(pl) => planes.push(pl),
                    Err(_) => {
                        built = false;
                        break 'outer;
                    }
                }
            }
        }
        if !built {
            continue;
        }
        let config = TenConfig {
            field: ext.clone(),
            planes,
            provenance: Provenance {
                recipe: "morin13".into(),
                seed,
                source: "constructed".into(),
            },
        };
        let rep = config.verify();
        if rep.all_incident && rep.isotropic && rep.span_dim == 10 && rep.planes_distinct {
            return Ok(Morin13Data {
                base,
                ext,
                conics: [conics[0].clone(), conics[1].clone(), conics[2].clone()],
                pair_points,
                quadric_mats,
                attempts: attempt,
                config,
            });
        }
    }
    Err(TenError::Construction(
        "no conic triple reached a spanning configuration within the attempt bound".into(),
    ))
}

// ---- the wedge congruence ----

const PAIRS4: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// The plane {u ^ w : w in k^4} inside P^5 = P(wedge^2 k^4).
pub fn wedge_plane(field: &FieldSpec, u: &[Scalar]) -> Result<Plane, TenError> {
    let mut rows = vec![];
    for i in 0..4 {
        let mut row = vec![field.zero(); 6];
        for (slot, &(a, b)) in PAIRS4.iter().enumerate() {
            row[slot] = if b == i {
                u[a].clone()
            } else if a == i {
                field.neg(&u[b])
            } else {
                field.zero()
            };
        }
        rows.push(row);
    }
    // any three rows meeting rank three span the image
    let mut picked: Vec<Vec<Scalar>> = vec![];
    for row in rows {
        let mut probe = picked.clone();
        probe.push(row.clone());
        if ExactMatrix::from_rows(probe.clone()).rank(field) == picked.len() + 1 {
            picked.push(row);
            if picked.len() == 3 {
                break;
            }
        }
    }
    if picked.len() != 3 {
        return Err(TenError::Construction("wedge image degenerate".into()));
    }
    Ok(Plane::from_rows(field, picked)?)
}

/// Ten distinct members of the wedge congruence, drawn by seed. Draws are
/// kept only when they grow the Pluecker span, so the ten returned planes
/// always span dimension ten and meet pairwise in points.
pub fn ruling_ten(field: &FieldSpec, seed: u64) -> Result<TenConfig, TenError> {
    let q = field.order().expect("finite field required");
    let count = u64::try_from(proj_count(q, 3)).expect("field too large");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7275_6c65);
    let mut seen = BTreeSet::new();
    let mut planes: Vec<Plane> = vec![];
    let mut span_rows: Vec<Vec<Scalar>> = vec![];
    let mut guard = 0u32;
    while planes.len() < 10 {
        guard += 1;
        if guard > 10_000 {
            return Err(TenError::Construction("wedge congruence exhausted".into()));
        }
        let idx = rng.gen_range(0..count);
        let u = proj_point_from_index(field, 3, idx as u128);
        if !seen.insert(format_point(field, &u)) {
            continue;
        }
        let plane = wedge_plane(field, &u)?;
        let mut probe = span_rows.clone();
        probe.push(plane.plucker_raw().to_vec());
        if ExactMatrix::from_rows(probe.clone()).rank(field) != planes.len() + 1 {
            continue;
        }
        span_rows = probe;
        planes.push(plane);
    }
    let config = TenConfig {
        field: field.clone(),
        planes,
        provenance: Provenance {
            recipe: "ruling".into(),
            seed,
            source: "constructed".into(),
        },
    };
    let rep = config.verify();
    if !(rep.all_incident && rep.isotropic && rep.span_dim == 10) {
        return Err(TenError::Construction(format!(
            "wedge draw: span {}, incident {}",
            rep.span_dim, rep.all_incident
        )));
    }
    Ok(config)
}
