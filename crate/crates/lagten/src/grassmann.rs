//! Planes in P^5, their Pluecker coordinates in P^19, and the wedge pairing.
//!
//! Index conventions used across the crate: basis triples of {0..5} are listed
//! lexicographically, giving the 20 coordinates of the third wedge power; the
//! pairing of two such coordinates is the coefficient of e_0^..^e_5 in the wedge
//! of the corresponding decomposables, which makes it a symplectic form.

use crate::field::{FieldSpec, Scalar};
use crate::matrix::ExactMatrix;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GrassmannError {
    #[error("matrix of a plane must be 3x6 with rank 3, got rank {0}")]
    RankDeficient(usize),
    #[error("plane is not transverse to the chart (defect {0})")]
    NotTransverse(usize),
    #[error("wedge vector is not decomposable (kernel dimension {0})")]
    NotDecomposable(usize),
    #[error("pencil rows are proportional, the two quadric value rows must be independent")]
    DegeneratePencil,
    #[error("quadric matrices must be symmetric 4x4")]
    BadWeb,
}

/// Lexicographic 3-subsets of {0..5}.
pub fn triples() -> &'static [[u8; 3]; 20] {
    static T: OnceLock<[[u8; 3]; 20]> = OnceLock::new();
    T.get_or_init(|| {
        let mut out = [[0u8; 3]; 20];
        let mut idx = 0;
        for a in 0..6u8 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    out[idx] = [a, b, c];
                    idx += 1;
                }
            }
        }
        out
    })
}

/// Lexicographic 4-subsets of {0..5}.
pub fn quads() -> &'static [[u8; 4]; 15] {
    static Q: OnceLock<[[u8; 4]; 15]> = OnceLock::new();
    Q.get_or_init(|| {
        let mut out = [[0u8; 4]; 15];
        let mut idx = 0;
        for a in 0..6u8 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    for d in c + 1..6 {
                        out[idx] = [a, b, c, d];
                        idx += 1;
                    }
                }
            }
        }
        out
    })
}

pub fn triple_index(t: &[u8; 3]) -> usize {
    triples().iter().position(|x| x == t).expect("valid triple")
}

fn permutation_sign(seq: &[u8]) -> i32 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// For each triple index: (index of the complementary triple, sign of the
/// permutation (S, S^c) of 012345).
pub fn pairing_table() -> &'static [(usize, i32); 20] {
    static P: OnceLock<[(usize, i32); 20]> = OnceLock::new();
    P.get_or_init(|| {
        let ts = triples();
        let mut out = [(0usize, 0i32); 20];
        for (i, t) in ts.iter().enumerate() {
            let comp: Vec<u8> = (0..6u8).filter(|x| !t.contains(x)).collect();
            let comp_arr = [comp[0], comp[1], comp[2]];
            let j = triple_index(&comp_arr);
            let seq = [t[0], t[1], t[2], comp[0], comp[1], comp[2]];
            out[i] = (j, permutation_sign(&seq));
        }
        out
    })
}

/// Wedge pairing of two third-wedge vectors: the coefficient of the top form in
/// u ^ v. Antisymmetric, so a symplectic form on the 20-dimensional space.
pub fn pairing(field: &FieldSpec, u: &[Scalar], v: &[Scalar]) -> Scalar {
    assert_eq!(u.len(), 20);
    assert_eq!(v.len(), 20);
    let table = pairing_table();
    let mut acc = field.zero();
    for (i, &(j, s)) in table.iter().enumerate() {
        let term = field.mul(&u[i], &v[j]);
        let term = if s < 0 { field.neg(&term) } else { term };
        acc = field.add(&acc, &term);
    }
    acc
}

/// Pluecker vector of a 3x6 matrix: the 3x3 minors in lexicographic column order.
pub fn plucker(field: &FieldSpec, mat: &ExactMatrix) -> Vec<Scalar> {
    assert_eq!((mat.nrows(), mat.ncols()), (3, 6));
    triples()
        .iter()
        .map(|t| {
            let cols = [t[0] as usize, t[1] as usize, t[2] as usize];
            mat.submatrix(&[0, 1, 2], &cols).det(field).expect("3x3")
        })
        .collect()
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn projective_normalize(field: &FieldSpec, v: &[Scalar]) -> Vec<Scalar> {
    let lead = v.iter().find(|x| !field.is_zero(x));
    match lead {
        None => v.to_vec(),
        Some(l) => {
            let inv = field.inv(l).unwrap();
            v.iter().map(|x| field.mul(x, &inv)).collect()
        }
    }
}

/// A plane in P^5, stored as a 3x6 matrix whose row space is the corresponding
/// 3-dimensional linear subspace.
#[derive(Clone, Debug)]
pub struct Plane {
    mat: ExactMatrix,
    plucker: Vec<Scalar>,
}

impl Plane {
    pub fn new(field: &FieldSpec, mat: ExactMatrix) -> Result<Plane, GrassmannError> {
        assert_eq!((mat.nrows(), mat.ncols()), (3, 6), "plane matrix must be 3x6");
        let r = mat.rank(field);
        if r != 3 {
            return Err(GrassmannError::RankDeficient(r));
        }
        let plucker = plucker(field, &mat);
        Ok(Plane { mat, plucker })
    }

    pub fn from_rows(field: &FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Plane, GrassmannError> {
        Plane::new(field, ExactMatrix::from_rows(rows))
    }

    pub fn mat(&self) -> &ExactMatrix {
        &self.mat
    }

    pub fn plucker_raw(&self) -> &[Scalar] {
        &self.plucker
    }

    pub fn plucker_normalized(&self, field: &FieldSpec) -> Vec<Scalar> {
        projective_normalize(field, &self.plucker)
    }

    /// Row-reduced canonical representative of the row space.
    pub fn canonical(&self, field: &FieldSpec) -> ExactMatrix {
        self.mat.rref(field).mat
    }

    pub fn eq_projective(&self, field: &FieldSpec, other: &Plane) -> bool {
        self.canonical(field) == other.canonical(field)
    }

    pub fn contains_point(&self, field: &FieldSpec, v: &[Scalar]) -> bool {
        let vm = ExactMatrix::from_rows(vec![v.to_vec()]);
        ExactMatrix::stack_vertical(&[&self.mat, &vm]).rank(field) == 3
    }

    /// Annihilator plane: the rows span the kernel of x -> (r_1.x, r_2.x, r_3.x).
    pub fn dual(&self, field: &FieldSpec) -> Plane {
        let ker = self.mat.kernel(field);
        assert_eq!(ker.ncols(), 3);
        Plane::new(field, ker.transpose()).expect("kernel of rank-3 map has rank 3")
    }
}

/// Projective dimension of the intersection of two planes:
/// -1 disjoint, 0 point, 1 line, 2 equal.
pub fn meet_dim(field: &FieldSpec, a: &Plane, b: &Plane) -> i64 {
    let stack = ExactMatrix::stack_vertical(&[a.mat(), b.mat()]);
    5 - stack.rank(field) as i64
}

/// The intersection point when the planes meet in projective dimension 0,
/// normalized so the first nonzero coordinate is 1.
pub fn intersection_point(field: &FieldSpec, a: &Plane, b: &Plane) -> Option<Vec<Scalar>> {
    if meet_dim(field, a, b) != 0 {
        return None;
    }
    let at = a.mat().transpose();
    let bt_neg = b.mat().transpose().scale(field, &field.from_i64(-1));
    let sys = ExactMatrix::hstack(&[&at, &bt_neg]);
    let ker = sys.kernel(field);
    assert_eq!(ker.ncols(), 1, "dimension-0 meet has a 1-dim coefficient kernel");
    let coefs: Vec<Scalar> = (0..3).map(|i| ker.get(i, 0).clone()).collect();
    let pt = at.matvec(field, &[coefs[0].clone(), coefs[1].clone(), coefs[2].clone()]);
    Some(projective_normalize(field, &pt))
}

/// A coordinate chart on the Grassmannian: the three pivot coordinates carry
/// the identity block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chart(pub [usize; 3]);

impl Chart {
    pub fn complement(&self) -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut idx = 0;
        for c in 0..6 {
            if !self.0.contains(&c) {
                out[idx] = c;
                idx += 1;
            }
        }
        out
    }

    pub fn all() -> Vec<Chart> {
        let mut out = vec![];
        for a in 0..6 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    out.push(Chart([a, b, c]));
                }
            }
        }
        out
    }
}

/// Normal form of a plane in a chart: writes the plane as the column space of a
/// 6x3 matrix with identity block at the pivot coordinates and returns the 3x3
/// block sitting at the complementary coordinates.
pub fn chart_matrix(
    field: &FieldSpec,
    plane: &Plane,
    chart: Chart,
) -> Result<ExactMatrix, GrassmannError> {
    let m0 = plane.mat().transpose(); // 6x3, columns span the plane
    let b = m0.submatrix(&chart.0, &[0, 1, 2]);
    let rank = b.rank(field);
    if rank != 3 {
        return Err(GrassmannError::NotTransverse(3 - rank));
    }
    // m = m0 * b^{-1} has identity at the pivot rows
    let sol = b
        .transpose()
        .solve(field, &m0.transpose())
        .expect("invertible block");
    let m = sol.particular.transpose(); // 6x3 normalized: m0 * b^{-1}
    Ok(m.submatrix(&chart.complement(), &[0, 1, 2]))
}

/// Rebuilds the plane with chart block `a` (3x3) at the complementary rows.
pub fn plane_from_chart(field: &FieldSpec, chart: Chart, a: &ExactMatrix) -> Plane {
    assert_eq!((a.nrows(), a.ncols()), (3, 3));
    let mut m = ExactMatrix::zeros(field, 6, 3);
    for (i, &r) in chart.0.iter().enumerate() {
        m.set(r, i, field.one());
    }
    for (i, &r) in chart.complement().iter().enumerate() {
        for j in 0..3 {
            m.set(r, j, a.get(i, j).clone());
        }
    }
    Plane::new(field, m.transpose()).expect("chart form has full rank")
}

#[derive(Debug)]
pub enum Decomposability {
    Zero,
    Plane(Box<Plane>),
    No { kernel_dim: usize },
}

/// Tests whether a third-wedge vector is decomposable by computing the kernel of
/// u -> u ^ omega; kernel dimension 3 recovers the plane.
pub fn is_decomposable(field: &FieldSpec, omega: &[Scalar]) -> Decomposability {
    assert_eq!(omega.len(), 20);
    if omega.iter().all(|c| field.is_zero(c)) {
        return Decomposability::Zero;
    }
    let m = wedge_action_matrix(field, omega);
    let ker = m.kernel(field);
    match ker.ncols() {
        3 => {
            let plane = Plane::new(field, ker.transpose()).expect("kernel has rank 3");
            debug_assert!({
                let p = plane.plucker_normalized(field);
                let o = projective_normalize(field, omega);
                p == o
            });
            Decomposability::Plane(Box::new(plane))
        }
        kd => Decomposability::No { kernel_dim: kd },
    }
}

/// The 15x6 matrix of u -> u ^ omega in the wedge bases.
pub fn wedge_action_matrix(field: &FieldSpec, omega: &[Scalar]) -> ExactMatrix {
    let qs = quads();
    ExactMatrix::from_fn(15, 6, |r, a| {
        let t = &qs[r];
        let a8 = a as u8;
        if !t.contains(&a8) {
            return field.zero();
        }
        let rest: Vec<u8> = t.iter().copied().filter(|&x| x != a8).collect();
        let pos = t.iter().position(|&x| x == a8).unwrap();
        let idx = triple_index(&[rest[0], rest[1], rest[2]]);
        if pos % 2 == 0 {
            omega[idx].clone()
        } else {
            field.neg(&omega[idx])
        }
    })
}

/// Induced action of g on the third wedge: entry (t, s) is the minor of g with
/// rows t and columns s, so row-space transport R -> R g satisfies
/// plucker(R g)_s = sum_t plucker(R)_t * W_{t,s} (Cauchy-Binet).
pub fn wedge_cube_matrix(field: &FieldSpec, g: &ExactMatrix) -> ExactMatrix {
    assert_eq!((g.nrows(), g.ncols()), (6, 6));
    let ts = triples();
    ExactMatrix::from_fn(20, 20, |t, s| {
        let rows = [ts[t][0] as usize, ts[t][1] as usize, ts[t][2] as usize];
        let cols = [ts[s][0] as usize, ts[s][1] as usize, ts[s][2] as usize];
        g.submatrix(&rows, &cols).det(field).expect("3x3")
    })
}

/// Pluecker coordinates in Gr(2,4) of the pencil spanned by the value rows of
/// two points against a web of four symmetric 4x4 quadric matrices: the six
/// 2x2 minors, in lexicographic column-pair order, of the 2x4 matrix
/// [v^T A_i v ; w^T A_i w].
pub fn bitangent_pencil(
    field: &FieldSpec,
    web: &[ExactMatrix; 4],
    v: &[Scalar],
    w: &[Scalar],
) -> Result<[Scalar; 6], GrassmannError> {
    if web.iter().any(|m| m.nrows() != 4 || m.ncols() != 4 || !m.is_symmetric()) {
        return Err(GrassmannError::BadWeb);
    }
    assert_eq!(v.len(), 4);
    assert_eq!(w.len(), 4);
    let quad_value = |m: &ExactMatrix, x: &[Scalar]| {
        let mx = m.matvec(field, x);
        let mut acc = field.zero();
        for i in 0..4 {
            acc = field.add(&acc, &field.mul(&x[i], &mx[i]));
        }
        acc
    };
    let r1: Vec<Scalar> = web.iter().map(|m| quad_value(m, v)).collect();
    let r2: Vec<Scalar> = web.iter().map(|m| quad_value(m, w)).collect();
    let mut out = [
        field.zero(),
        field.zero(),
        field.zero(),
        field.zero(),
        field.zero(),
        field.zero(),
    ];
    let mut idx = 0;
    let mut all_zero = true;
    for i in 0..4 {
        for j in i + 1..4 {
            let m = field.sub(&field.mul(&r1[i], &r2[j]), &field.mul(&r1[j], &r2[i]));
            if !field.is_zero(&m) {
                all_zero = false;
            }
            out[idx] = m;
            idx += 1;
        }
    }
    if all_zero {
        return Err(GrassmannError::DegeneratePencil);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f() -> FieldSpec {
        FieldSpec::prime(101).unwrap()
    }

    fn std_plane(field: &FieldSpec, coords: [usize; 3]) -> Plane {
        let mut m = ExactMatrix::zeros(field, 3, 6);
        for (i, &c) in coords.iter().enumerate() {
            m.set(i, c, field.one());
        }
        Plane::new(field, m).unwrap()
    }

    fn random_plane(field: &FieldSpec, rng: &mut ChaCha8Rng) -> Plane {
        loop {
            let m = ExactMatrix::from_fn(3, 6, |_, _| field.rand_scalar(rng));
            if let Ok(p) = Plane::new(field, m) {
                return p;
            }
        }
    }

    #[test]
    fn triple_table_is_lex() {
        let ts = triples();
        assert_eq!(ts[0], [0, 1, 2]);
        assert_eq!(ts[1], [0, 1, 3]);
        assert_eq!(ts[19], [3, 4, 5]);
        assert_eq!(triple_index(&[1, 2, 4]), 11);
    }

    #[test]
    fn pairing_of_standard_planes() {
        let field = f();
        let a = std_plane(&field, [0, 1, 2]);
        let b = std_plane(&field, [3, 4, 5]);
        // e_012 ^ e_345 = +e_012345
        let val = pairing(&field, a.plucker_raw(), b.plucker_raw());
        assert_eq!(val, field.one());
        // meeting planes pair to zero
        let c = std_plane(&field, [0, 1, 3]);
        let val2 = pairing(&field, a.plucker_raw(), c.plucker_raw());
        assert!(field.is_zero(&val2));
    }

    #[test]
    fn pairing_is_antisymmetric() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let u: Vec<Scalar> = (0..20).map(|_| field.rand_scalar(&mut rng)).collect();
            let v: Vec<Scalar> = (0..20).map(|_| field.rand_scalar(&mut rng)).collect();
            let uv = pairing(&field, &u, &v);
            let vu = pairing(&field, &v, &u);
            assert_eq!(uv, field.neg(&vu));
        }
    }

    #[test]
    fn incidence_iff_pairing_vanishes() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen_incident = 0;
        let mut seen_disjoint = 0;
        for _ in 0..60 {
            let a = random_plane(&field, &mut rng);
            let b = random_plane(&field, &mut rng);
            let dim = meet_dim(&field, &a, &b);
            let pair = pairing(&field, a.plucker_raw(), b.plucker_raw());
            if dim >= 0 {
                assert!(field.is_zero(&pair), "incident planes must pair to zero");
                seen_incident += 1;
            } else {
                assert!(!field.is_zero(&pair), "disjoint planes must pair nonzero");
                seen_disjoint += 1;
            }
        }
        // over a field of 101 elements both cases occur in 60 random draws
        assert!(seen_disjoint > 0);
        let _ = seen_incident;
    }

    #[test]
    fn intersection_point_lies_in_both() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut found = 0;
        for _ in 0..200 {
            // planes sharing a random point meet in dimension >= 0
            let pt: Vec<Scalar> = (0..6).map(|_| field.rand_scalar(&mut rng)).collect();
            if pt.iter().all(|x| field.is_zero(x)) {
                continue;
            }
            let mk = |rng: &mut ChaCha8Rng| {
                let mut rows = vec![pt.clone()];
                for _ in 0..2 {
                    rows.push((0..6).map(|_| field.rand_scalar(rng)).collect());
                }
                Plane::from_rows(&field, rows)
            };
            let (Ok(a), Ok(b)) = (mk(&mut rng), mk(&mut rng)) else { continue };
            if meet_dim(&field, &a, &b) != 0 {
                continue;
            }
            let p = intersection_point(&field, &a, &b).unwrap();
            assert!(a.contains_point(&field, &p));
            assert!(b.contains_point(&field, &p));
            let expect = projective_normalize(&field, &pt);
            assert_eq!(p, expect);
            found += 1;
        }
        assert!(found > 50, "expected plenty of dimension-0 samples, got {found}");
    }

    #[test]
    fn chart_roundtrip() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let chart = Chart([0, 1, 2]);
        for _ in 0..20 {
            let a = ExactMatrix::from_fn(3, 3, |_, _| field.rand_scalar(&mut rng));
            let plane = plane_from_chart(&field, chart, &a);
            let back = chart_matrix(&field, &plane, chart).unwrap();
            assert_eq!(back, a);
        }
    }

    #[test]
    fn chart_rejects_non_transverse() {
        let field = f();
        let plane = std_plane(&field, [0, 1, 3]);
        let err = chart_matrix(&field, &plane, Chart([3, 4, 5]));
        assert!(matches!(err, Err(GrassmannError::NotTransverse(_))));
    }

    #[test]
    fn chart_det_encodes_incidence() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let chart = Chart([0, 1, 2]);
        for _ in 0..40 {
            let a = ExactMatrix::from_fn(3, 3, |_, _| field.rand_scalar(&mut rng));
            let b = ExactMatrix::from_fn(3, 3, |_, _| field.rand_scalar(&mut rng));
            let pa = plane_from_chart(&field, chart, &a);
            let pb = plane_from_chart(&field, chart, &b);
            let d = a.sub(&field, &b).det(&field).unwrap();
            let incident = meet_dim(&field, &pa, &pb) >= 0;
            assert_eq!(incident, field.is_zero(&d));
        }
    }

    #[test]
    fn decomposable_roundtrip() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let p = random_plane(&field, &mut rng);
            match is_decomposable(&field, p.plucker_raw()) {
                Decomposability::Plane(q) => {
                    assert!(p.eq_projective(&field, &q));
                }
                _ => panic!("pluecker vector of a plane must be decomposable"),
            }
        }
    }

    #[test]
    fn generic_wedge_vector_is_not_decomposable() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut rejected = 0;
        for _ in 0..20 {
            let omega: Vec<Scalar> = (0..20).map(|_| field.rand_scalar(&mut rng)).collect();
            if let Decomposability::No { kernel_dim } = is_decomposable(&field, &omega) {
                assert_eq!(kernel_dim, 0, "generic kernel is trivial");
                rejected += 1;
            }
        }
        assert!(rejected >= 19, "random 20-vectors are essentially never decomposable");
    }

    #[test]
    fn plucker_functorial_under_gl6() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let plane = random_plane(&field, &mut rng);
        let g = loop {
            let g = ExactMatrix::from_fn(6, 6, |_, _| field.rand_scalar(&mut rng));
            if !field.is_zero(&g.det(&field).unwrap()) {
                break g;
            }
        };
        let moved = Plane::new(&field, plane.mat().mul(&field, &g)).unwrap();
        let w = wedge_cube_matrix(&field, &g);
        // row vector times matrix: transported pluecker coordinates
        let p = plane.plucker_raw();
        let expect: Vec<Scalar> = (0..20)
            .map(|s| {
                let mut acc = field.zero();
                for t in 0..20 {
                    acc = field.add(&acc, &field.mul(&p[t], w.get(t, s)));
                }
                acc
            })
            .collect();
        assert_eq!(moved.plucker_raw(), &expect[..]);
    }

    #[test]
    fn dual_plane_annihilates() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let p = random_plane(&field, &mut rng);
        let d = p.dual(&field);
        let prod = p.mat().mul(&field, &d.mat().transpose());
        assert!(prod.is_zero(&field));
        assert!(p.dual(&field).dual(&field).eq_projective(&field, &p));
    }

    #[test]
    fn bitangent_pencil_satisfies_plucker_relation() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let sym = |rng: &mut ChaCha8Rng| {
            let mut m = ExactMatrix::zeros(&field, 4, 4);
            for i in 0..4 {
                for j in i..4 {
                    let v = field.rand_scalar(rng);
                    m.set(i, j, v.clone());
                    m.set(j, i, v);
                }
            }
            m
        };
        let web = [
            sym(&mut rng),
            sym(&mut rng),
            sym(&mut rng),
            sym(&mut rng),
        ];
        let v: Vec<Scalar> = (0..4).map(|_| field.rand_scalar(&mut rng)).collect();
        let w: Vec<Scalar> = (0..4).map(|_| field.rand_scalar(&mut rng)).collect();
        let m = bitangent_pencil(&field, &web, &v, &w).unwrap();
        // m01 m23 - m02 m13 + m03 m12 = 0
        let t1 = field.mul(&m[0], &m[5]);
        let t2 = field.mul(&m[1], &m[4]);
        let t3 = field.mul(&m[2], &m[3]);
        let rel = field.add(&field.sub(&t1, &t2), &t3);
        assert!(field.is_zero(&rel));
    }

    #[test]
    fn bitangent_pencil_rejects_proportional_rows() {
        let field = f();
        let web = [
            ExactMatrix::identity(&field, 4),
            ExactMatrix::identity(&field, 4),
            ExactMatrix::identity(&field, 4),
            ExactMatrix::identity(&field, 4),
        ];
        let v: Vec<Scalar> = (0..4).map(|i| field.from_u64(i + 1)).collect();
        let w = v.clone();
        assert!(matches!(
            bitangent_pencil(&field, &web, &v, &w),
            Err(GrassmannError::DegeneratePencil)
        ));
    }
}
