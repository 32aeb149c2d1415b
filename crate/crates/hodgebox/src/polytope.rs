//! Input validation and basic queries on the lattice simplicial polytope.
//!
//! A valid polytope here means: integer vertex coordinates, full-dimensional,
//! every facet has exactly `n` vertices, the origin is strictly interior, and
//! every listed point really is a vertex of the hull. Violations are reported
//! as distinct error variants so the CLI can name the broken assumption.
//!
//! Facet enumeration is brute force over all `n`-subsets of the vertices with
//! exact side tests; at the intended scale (tens of vertices, rank at most
//! four or so) this beats carrying a convex hull implementation.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::exact::{solve_exact, IntMatrix, RatMatrix, SpanReducer};
use crate::{Error, Result};

/// A facet together with the data every later stage keeps asking for: the
/// primitive outer normal (`normal . x <= offset` on P, `offset > 0`) and the
/// inverse of the vertex matrix for barycentric solves in the facet cone.
#[derive(Debug, Clone)]
pub struct Facet {
    pub vertex_indices: Vec<usize>,
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
    inverse: RatMatrix,
}

impl Facet {
    /// Barycentric coordinates of `x` with respect to this facet's vertices.
    pub fn coordinates(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.inverse.mat_vec(x)
    }
}

/// A face of the polytope, stored as its sorted vertex index set.
/// The empty face is `vertex_indices = []` (dimension -1).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    pub vertex_indices: Vec<usize>,
}

impl Face {
    pub fn dim(&self) -> isize {
        self.vertex_indices.len() as isize - 1
    }
}

#[derive(Debug, Clone)]
pub struct LatticePolytope {
    rank: usize,
    vertices: Vec<Vec<BigInt>>,
    labels: Option<Vec<String>>,
    facets: Vec<Facet>,
}

fn fmt_point(p: &[BigInt]) -> String {
    let coords: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", coords.join(","))
}

fn dot_ib(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All `k`-subsets of `0..m`, lexicographic.
fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=m.saturating_sub(need) {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    if k <= m {
        rec(0, m, k, &mut cur, &mut out);
    }
    out
}

/// Exact test whether `p` lies in the convex hull of `points`.
///
/// Caratheodory: enough to find an affinely independent subset of size at
/// most `n + 1` whose (then unique) barycentric coordinates for `p` are all
/// nonnegative.
fn point_in_hull(p: &[BigInt], points: &[&Vec<BigInt>], rank: usize) -> bool {
    let target: Vec<BigRational> = p
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .chain(std::iter::once(BigRational::one()))
        .collect();
    for size in 1..=(rank + 1).min(points.len()) {
        for subset in subsets(points.len(), size) {
            // rows: coordinates, then the affine row of ones
            let cols: Vec<Vec<BigRational>> = subset
                .iter()
                .map(|&j| {
                    points[j]
                        .iter()
                        .map(|v| BigRational::from_integer(v.clone()))
                        .chain(std::iter::once(BigRational::one()))
                        .collect()
                })
                .collect();
            let m = RatMatrix::from_columns(cols, rank + 1);
            if let Some(lambda) = solve_exact(&m, &target) {
                if lambda.iter().all(|l| !l.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

/// Primitive integer vector proportional to the rational input.
fn primitive_from_rational(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

impl LatticePolytope {
    /// Validates the vertex list against the input assumptions and
    /// precomputes the facet structure.
    pub fn validate(vertices: Vec<Vec<BigInt>>, labels: Option<Vec<String>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::BadInput("empty vertex list".into()));
        }
        let rank = vertices[0].len();
        if rank == 0 {
            return Err(Error::BadInput("rank must be at least 1".into()));
        }
        if let Some(bad) = vertices.iter().position(|v| v.len() != rank) {
            return Err(Error::BadInput(format!(
                "vertex #{bad} has {} coordinates, expected {rank}",
                vertices[bad].len()
            )));
        }
        if let Some(labels) = &labels {
            if labels.len() != vertices.len() {
                return Err(Error::BadInput("label count != vertex count".into()));
            }
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.iter().all(|c| c.is_zero()) {
                return Err(Error::RedundantPoint {
                    index: i,
                    point: fmt_point(v),
                });
            }
            if let Some(j) = vertices[..i].iter().position(|w| w == v) {
                let _ = j;
                return Err(Error::RedundantPoint {
                    index: i,
                    point: fmt_point(v),
                });
            }
        }

        // the hull must be full-dimensional: affine span rank n, i.e. the
        // rows (v_i, 1) must have rank n + 1
        let span = SpanReducer::from_vectors(
            rank + 1,
            vertices.iter().map(|v| {
                v.iter()
                    .map(|c| BigRational::from_integer(c.clone()))
                    .chain(std::iter::once(BigRational::one()))
                    .collect()
            }),
        );
        if span.rank() < rank + 1 {
            return Err(Error::NotFullDimensional {
                found: span.rank() - 1,
                expected: rank,
            });
        }

        let m = vertices.len();
        let mut facets: Vec<Facet> = Vec::new();
        for subset in subsets(m, rank) {
            // hyperplane a.x = b through the subset: kernel of [V | -1]
            let rows: Vec<Vec<BigRational>> = subset
                .iter()
                .map(|&i| {
                    vertices[i]
                        .iter()
                        .map(|c| BigRational::from_integer(c.clone()))
                        .chain(std::iter::once(BigRational::from_integer(-BigInt::one())))
                        .collect()
                })
                .collect();
            let ker = RatMatrix::from_rows(rows).nullspace();
            if ker.cols() != 1 {
                continue; // affinely degenerate subset
            }
            let ab = primitive_from_rational(&ker.column(0));
            let (mut a, mut b) = (ab[..rank].to_vec(), ab[rank].clone());
            // orient so every vertex satisfies a.w <= b
            let evals: Vec<BigInt> = vertices.iter().map(|w| dot_ib(&a, w)).collect();
            let any_above = evals.iter().any(|e| e > &b);
            let any_below = evals.iter().any(|e| e < &b);
            if any_above && any_below {
                continue; // not a supporting hyperplane
            }
            if any_above {
                for c in a.iter_mut() {
                    *c = -&*c;
                }
                b = -b;
            }
            if b <= BigInt::zero() {
                return Err(Error::OriginNotInterior {
                    hyperplane: format!("{} . x = {}", fmt_point(&a), b),
                });
            }
            let on: Vec<usize> = (0..m)
                .filter(|&i| dot_ib(&a, &vertices[i]) == b)
                .collect();
            if on.len() > rank {
                // either a non-vertex point sits inside this facet, or the
                // facet genuinely has too many vertices
                for &i in &on {
                    let others: Vec<&Vec<BigInt>> = on
                        .iter()
                        .filter(|&&j| j != i)
                        .map(|&j| &vertices[j])
                        .collect();
                    if point_in_hull(&vertices[i], &others, rank) {
                        return Err(Error::RedundantPoint {
                            index: i,
                            point: fmt_point(&vertices[i]),
                        });
                    }
                }
                return Err(Error::NotSimplicial {
                    on_hyperplane: on.len(),
                    rank,
                });
            }
            if facets.iter().any(|f| f.vertex_indices == subset) {
                continue;
            }
            let mat = RatMatrix::from_columns(
                subset
                    .iter()
                    .map(|&i| {
                        vertices[i]
                            .iter()
                            .map(|c| BigRational::from_integer(c.clone()))
                            .collect()
                    })
                    .collect(),
                rank,
            );
            let inverse = mat.inverse().ok_or_else(|| {
                Error::Internal("facet vertex matrix is singular".into())
            })?;
            facets.push(Facet {
                vertex_indices: subset,
                normal: a,
                offset: b,
                inverse,
            });
        }

        // every input point must be a vertex of some facet
        let mut seen = vec![false; m];
        for f in &facets {
            for &i in &f.vertex_indices {
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::RedundantPoint {
                index: i,
                point: fmt_point(&vertices[i]),
            });
        }

        facets.sort_by(|a, b| a.vertex_indices.cmp(&b.vertex_indices));
        Ok(LatticePolytope {
            rank,
            vertices,
            labels,
            facets,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.vertices
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn enumerate_facets(&self) -> Vec<Face> {
        self.facets
            .iter()
            .map(|f| Face {
                vertex_indices: f.vertex_indices.clone(),
            })
            .collect()
    }

    /// Every proper face: the empty face plus all nonempty subsets of facet
    /// vertex sets (correct because the polytope is simplicial).
    pub fn all_faces(&self) -> Vec<Face> {
        let mut set = std::collections::BTreeSet::new();
        set.insert(Vec::new());
        for f in &self.facets {
            let k = f.vertex_indices.len();
            for size in 1..=k {
                for sub in subsets(k, size) {
                    set.insert(sub.iter().map(|&i| f.vertex_indices[i]).collect());
                }
            }
        }
        let mut faces: Vec<Face> = set
            .into_iter()
            .map(|vertex_indices| Face { vertex_indices })
            .collect();
        faces.sort_by_key(|f| (f.vertex_indices.len(), f.vertex_indices.clone()));
        faces
    }

    /// `n! * vol(P)`, summed facet by facet over the cone decomposition.
    pub fn normalized_volume(&self) -> BigInt {
        let mut total = BigInt::zero();
        for f in &self.facets {
            let m = IntMatrix::from_columns(
                f.vertex_indices
                    .iter()
                    .map(|&i| self.vertices[i].clone())
                    .collect(),
                self.rank,
            );
            total += m.determinant().expect("facet matrix is square").abs();
        }
        total
    }

    /// The gauge `deg_P(x) = min { l : x in l*P }` via the facet cone
    /// containing `x`: solve `x = sum lambda_i v_i`, return `sum lambda_i`.
    pub fn degree_of_point(&self, x: &[BigRational]) -> BigRational {
        let (_, _, lambda) = self.locate(x);
        lambda.into_iter().sum()
    }

    /// Same gauge through the facet normals: `max_F (a_F . x) / b_F`.
    /// Kept separate from `degree_of_point` as an independent route.
    pub fn degree_by_normals(&self, x: &[BigRational]) -> BigRational {
        let mut best: Option<BigRational> = None;
        for f in &self.facets {
            let num: BigRational = f
                .normal
                .iter()
                .zip(x)
                .map(|(a, v)| BigRational::from_integer(a.clone()) * v)
                .sum();
            let val = num / BigRational::from_integer(f.offset.clone());
            if best.as_ref().is_none_or(|b| &val > b) {
                best = Some(val);
            }
        }
        best.expect("validated polytope has facets")
    }

    /// Finds a facet cone containing `x` and the barycentric coordinates of
    /// `x` in it. Returns `(degree, facet index, lambda)`.
    ///
    /// The facet achieving the maximum of `(a_F . x)/b_F` spans a cone that
    /// contains `x`, so no search over sign patterns is needed.
    pub fn locate(&self, x: &[BigRational]) -> (BigRational, usize, Vec<BigRational>) {
        let mut best: Option<(BigRational, usize)> = None;
        for (idx, f) in self.facets.iter().enumerate() {
            let num: BigRational = f
                .normal
                .iter()
                .zip(x)
                .map(|(a, v)| BigRational::from_integer(a.clone()) * v)
                .sum();
            let val = num / BigRational::from_integer(f.offset.clone());
            if best.as_ref().is_none_or(|(b, _)| &val > b) {
                best = Some((val, idx));
            }
        }
        let (deg, idx) = best.expect("validated polytope has facets");
        let lambda = self.facets[idx].coordinates(x);
        debug_assert!(lambda.iter().all(|l| !l.is_negative()));
        (deg, idx, lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use proptest::prelude::*;

    pub(crate) fn poly(vs: &[&[i64]]) -> Result<LatticePolytope> {
        LatticePolytope::validate(
            vs.iter()
                .map(|v| v.iter().map(|&c| BigInt::from(c)).collect())
                .collect(),
            None,
        )
    }

    #[test]
    fn segment_is_valid() {
        let p = poly(&[&[1], &[-1]]).unwrap();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.facets().len(), 2);
        assert_eq!(p.normalized_volume(), BigInt::from(2));
        let faces = p.all_faces();
        assert_eq!(faces.len(), 3); // empty + two vertices
    }

    #[test]
    fn triangle_is_valid() {
        let p = poly(&[&[1, 0], &[0, 1], &[-1, -1]]).unwrap();
        assert_eq!(p.facets().len(), 3);
        assert_eq!(p.normalized_volume(), BigInt::from(3));
        assert_eq!(p.all_faces().len(), 7); // empty + 3 vertices + 3 edges
    }

    #[test]
    fn origin_not_interior_is_rejected() {
        assert!(matches!(
            poly(&[&[1, 0], &[0, 1]]),
            Err(Error::NotFullDimensional { .. }) | Err(Error::OriginNotInterior { .. })
        ));
        // full-dimensional but hull misses the origin
        assert!(matches!(
            poly(&[&[1, 0], &[0, 1], &[1, 1]]),
            Err(Error::OriginNotInterior { .. })
        ));
    }

    #[test]
    fn square_facets_join_sign_adjacent_vertices() {
        let p = poly(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]).unwrap();
        assert_eq!(p.facets().len(), 4);
        for f in p.facets() {
            let a = &p.vertices()[f.vertex_indices[0]];
            let b = &p.vertices()[f.vertex_indices[1]];
            let agree = (a[0] == b[0]) ^ (a[1] == b[1]);
            assert!(agree, "edge endpoints must share exactly one coordinate");
        }
        assert_eq!(p.normalized_volume(), BigInt::from(8));
        assert_eq!(p.all_faces().len(), 9);
    }

    #[test]
    fn octahedron_has_eight_facets() {
        let p = poly(&[
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[0, 0, 1],
            &[0, 0, -1],
        ])
        .unwrap();
        assert_eq!(p.facets().len(), 8);
        assert!(p.enumerate_facets().iter().all(|f| f.vertex_indices.len() == 3));
        assert_eq!(p.normalized_volume(), BigInt::from(8));
    }

    #[test]
    fn cube_is_not_simplicial() {
        let mut vs = Vec::new();
        for x in [-1i64, 1] {
            for y in [-1i64, 1] {
                for z in [-1i64, 1] {
                    vs.push(vec![x, y, z]);
                }
            }
        }
        let refs: Vec<&[i64]> = vs.iter().map(|v| v.as_slice()).collect();
        assert!(matches!(
            poly(&refs),
            Err(Error::NotSimplicial { on_hyperplane: 4, rank: 3 })
        ));
    }

    #[test]
    fn non_vertex_points_are_rejected() {
        // midpoint of an edge
        assert!(matches!(
            poly(&[&[2], &[-2], &[1]]),
            Err(Error::RedundantPoint { index: 2, .. })
        ));
        // strictly interior point
        assert!(matches!(
            poly(&[&[1, 0], &[0, 1], &[-1, -1], &[0, 0]]),
            Err(Error::RedundantPoint { .. })
        ));
        // duplicate
        assert!(matches!(
            poly(&[&[1], &[-1], &[1]]),
            Err(Error::RedundantPoint { index: 2, .. })
        ));
    }

    #[test]
    fn degree_examples() {
        let p = poly(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]).unwrap();
        assert_eq!(p.degree_of_point(&[rat_int(0), rat_int(0)]), rat_int(0));
        for v in p.vertices() {
            let x: Vec<BigRational> = v
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect();
            assert_eq!(p.degree_of_point(&x), rat_int(1));
        }
        assert_eq!(p.degree_of_point(&[rat_int(1), rat_int(0)]), rat_int(1));
        assert_eq!(p.degree_of_point(&[rat(1, 2), rat(1, 2)]), rat(1, 2));
    }

    #[test]
    fn euler_relation_on_builtins() {
        for vs in [
            vec![vec![1i64], vec![-1]],
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]],
            vec![
                vec![1, 0, 0],
                vec![-1, 0, 0],
                vec![0, 1, 0],
                vec![0, -1, 0],
                vec![0, 0, 1],
                vec![0, 0, -1],
            ],
        ] {
            let refs: Vec<&[i64]> = vs.iter().map(|v| v.as_slice()).collect();
            let p = poly(&refs).unwrap();
            let n = p.rank() as isize;
            // boundary sphere: sum_{k>=0} (-1)^k f_k = 1 - (-1)^n
            let mut euler = 0isize;
            for f in p.all_faces() {
                if f.dim() >= 0 {
                    euler += if f.dim() % 2 == 0 { 1 } else { -1 };
                }
            }
            assert_eq!(euler, 1 - if n % 2 == 0 { 1 } else { -1 });
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn degree_is_positively_homogeneous(
            xn in proptest::collection::vec(-12i64..=12, 2),
            c_num in 0i64..=9, c_den in 1i64..=4,
        ) {
            let p = poly(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]).unwrap();
            let x: Vec<BigRational> = xn.iter().map(|&v| rat_int(v)).collect();
            let c = rat(c_num, c_den);
            let cx: Vec<BigRational> = x.iter().map(|v| v * &c).collect();
            prop_assert_eq!(p.degree_of_point(&cx), p.degree_of_point(&x) * &c);
        }

        #[test]
        fn degree_routes_agree_and_bound_membership(
            num in proptest::collection::vec(-8i64..=8, 2),
            den in 1i64..=5,
        ) {
            let p = poly(&[&[1, 0], &[0, 2], &[-1, -1]]).unwrap();
            let x: Vec<BigRational> = num.iter().map(|&v| rat(v, den)).collect();
            let d1 = p.degree_of_point(&x);
            let d2 = p.degree_by_normals(&x);
            prop_assert_eq!(&d1, &d2);
            // deg <= 1 iff x satisfies every facet inequality
            let inside = p.facets().iter().all(|f| {
                let lhs: BigRational = f.normal.iter().zip(&x)
                    .map(|(a, v)| BigRational::from_integer(a.clone()) * v)
                    .sum();
                lhs <= BigRational::from_integer(f.offset.clone())
            });
            prop_assert_eq!(d1 <= rat_int(1), inside);
        }
    }
}
