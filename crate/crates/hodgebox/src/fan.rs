//! The stacky fan of the polytope and its quotient fans.
//!
//! Rays carry the polytope vertices verbatim as marked generators - they are
//! deliberately not reduced to primitive vectors, since the markings drive
//! both the box elements and the degree function. Cones are stored as sorted
//! ray index sets, closed under taking subsets, with the empty cone first.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::exact::{smith_normal_form, IntMatrix, RatMatrix};
use crate::polytope::LatticePolytope;
use crate::{Error, Result};

/// Index of a cone inside a fixed fan's cone list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConeId(usize);

impl ConeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone)]
struct MaxConeGeometry {
    normal: Vec<BigInt>,
    offset: BigInt,
    inverse: RatMatrix,
}

#[derive(Debug, Clone)]
pub struct StackyFan {
    rank: usize,
    rays: Vec<Vec<BigInt>>,
    /// sorted by (dimension, ray set); entry 0 is the zero cone
    cones: Vec<Vec<usize>>,
    cone_index: HashMap<Vec<usize>, ConeId>,
    maximal: Vec<ConeId>,
    max_geom: HashMap<usize, MaxConeGeometry>,
    complete: bool,
}

/// Location of a rational point in the fan: the gauge value, a maximal cone
/// containing it, the barycentric coordinates with respect to that cone's
/// markings, and the minimal cone (support of the positive coordinates).
#[derive(Debug, Clone)]
pub struct PointLocation {
    pub degree: BigRational,
    pub maximal: ConeId,
    pub minimal: ConeId,
    /// aligned with the maximal cone's ray list
    pub lambda: Vec<BigRational>,
}

impl PointLocation {
    /// The positive barycentric coordinates as (ray id, lambda) pairs.
    pub fn support(&self, fan: &StackyFan) -> Vec<(usize, BigRational)> {
        fan.cone_rays(self.maximal)
            .iter()
            .zip(&self.lambda)
            .filter(|(_, l)| !l.is_zero())
            .map(|(&r, l)| (r, l.clone()))
            .collect()
    }
}

impl StackyFan {
    /// The stacky fan of a validated polytope: cones over the proper faces,
    /// marked by the vertices.
    pub fn from_polytope(p: &LatticePolytope) -> Self {
        let rank = p.rank();
        let rays = p.vertices().to_vec();
        let mut cones: Vec<Vec<usize>> = p
            .all_faces()
            .into_iter()
            .map(|f| f.vertex_indices)
            .collect();
        cones.sort_by_key(|c| (c.len(), c.clone()));
        let cone_index: HashMap<Vec<usize>, ConeId> = cones
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), ConeId(i)))
            .collect();
        let maximal: Vec<ConeId> = cones
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() == rank)
            .map(|(i, _)| ConeId(i))
            .collect();
        let mut max_geom = HashMap::new();
        for f in p.facets() {
            let id = cone_index[&f.vertex_indices];
            let inverse = RatMatrix::from_columns(
                f.vertex_indices
                    .iter()
                    .map(|&i| {
                        rays[i]
                            .iter()
                            .map(|c| BigRational::from_integer(c.clone()))
                            .collect()
                    })
                    .collect(),
                rank,
            )
            .inverse()
            .expect("facet cone generators are independent");
            max_geom.insert(
                id.0,
                MaxConeGeometry {
                    normal: f.normal.clone(),
                    offset: f.offset.clone(),
                    inverse,
                },
            );
        }
        StackyFan {
            rank,
            rays,
            cones,
            cone_index,
            maximal,
            max_geom,
            complete: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray(&self, id: usize) -> &[BigInt] {
        &self.rays[id]
    }

    pub fn cone_count(&self) -> usize {
        self.cones.len()
    }

    pub fn cone_ids(&self) -> impl Iterator<Item = ConeId> + '_ {
        (0..self.cones.len()).map(ConeId)
    }

    pub fn zero_cone(&self) -> ConeId {
        ConeId(0)
    }

    pub fn cone_rays(&self, id: ConeId) -> &[usize] {
        &self.cones[id.0]
    }

    pub fn cone_dim(&self, id: ConeId) -> usize {
        self.cones[id.0].len()
    }

    pub fn cone_codim(&self, id: ConeId) -> usize {
        self.rank - self.cone_dim(id)
    }

    pub fn maximal_cones(&self) -> &[ConeId] {
        &self.maximal
    }

    pub fn lookup(&self, rays: &[usize]) -> Option<ConeId> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        self.cone_index.get(&key).copied()
    }

    pub fn cone_id(&self, rays: &[usize]) -> Result<ConeId> {
        self.lookup(rays)
            .ok_or_else(|| Error::ConeNotInFan(rays.to_vec()))
    }

    /// True when the given ray set spans a cone of the fan.
    pub fn is_cone(&self, rays: &[usize]) -> bool {
        self.lookup(rays).is_some()
    }

    /// Marked generator matrix of a cone (columns are the ray markings).
    pub fn generator_matrix(&self, id: ConeId) -> IntMatrix {
        IntMatrix::from_columns(
            self.cones[id.0].iter().map(|&r| self.rays[r].clone()).collect(),
            self.rank,
        )
    }

    /// `Star(sigma)`: all cones having `sigma` as a face.
    pub fn star(&self, sigma: ConeId) -> Vec<ConeId> {
        let s = &self.cones[sigma.0];
        (0..self.cones.len())
            .filter(|&i| s.iter().all(|r| self.cones[i].contains(r)))
            .map(ConeId)
            .collect()
    }

    /// Closure of the star: faces of cones in the star.
    pub fn closed_star(&self, sigma: ConeId) -> Vec<ConeId> {
        let star = self.star(sigma);
        let mut out: Vec<ConeId> = (0..self.cones.len())
            .map(ConeId)
            .filter(|&t| {
                star.iter().any(|&d| {
                    self.cones[t.0]
                        .iter()
                        .all(|r| self.cones[d.0].contains(r))
                })
            })
            .collect();
        out.sort();
        out
    }

    /// `Link(sigma)`: cones of the closed star disjoint from `sigma`.
    pub fn link(&self, sigma: ConeId) -> Vec<ConeId> {
        self.closed_star(sigma)
            .into_iter()
            .filter(|&t| {
                self.cones[t.0]
                    .iter()
                    .all(|r| !self.cones[sigma.0].contains(r))
            })
            .collect()
    }

    /// Index of the subgroup generated by the markings inside its saturation,
    /// i.e. the product of the invariant factors of the generator matrix.
    pub fn multiplicity(&self, sigma: ConeId) -> BigInt {
        if self.cone_dim(sigma) == 0 {
            return BigInt::one();
        }
        let snf = smith_normal_form(&self.generator_matrix(sigma));
        snf.diagonal().iter().product::<BigInt>().abs()
    }

    /// f-vector (cone counts of `Sigma(sigma)` by dimension, starting at the
    /// zero cone) and h-vector of the quotient fan, purely combinatorial.
    pub fn f_and_h_vector(&self, sigma: ConeId) -> Result<(Vec<u64>, Vec<u64>)> {
        let c = self.cone_codim(sigma);
        let base = self.cone_dim(sigma);
        let mut counts = vec![0u64; c + 1];
        for d in self.star(sigma) {
            counts[self.cone_dim(d) - base] += 1;
        }
        let binom = |n: usize, k: usize| -> i128 {
            if k > n {
                return 0;
            }
            let mut acc: i128 = 1;
            for i in 0..k {
                acc = acc * (n - i) as i128 / (i + 1) as i128;
            }
            acc
        };
        let mut h = vec![0u64; c + 1];
        for (k, hk) in h.iter_mut().enumerate() {
            let mut acc: i128 = 0;
            for (d, &fd) in counts.iter().enumerate().take(k + 1) {
                let sign = if (k - d) % 2 == 0 { 1 } else { -1 };
                acc += sign * fd as i128 * binom(c - d, c - k);
            }
            if acc < 0 {
                return Err(Error::Internal(format!(
                    "negative h-vector entry h_{k} = {acc}"
                )));
            }
            *hk = acc as u64;
        }
        Ok((counts, h))
    }

    /// Gauge value of a rational point, `max_F (normal_F . x)/offset_F`.
    pub fn degree(&self, x: &[BigRational]) -> BigRational {
        self.locate(x).degree
    }

    pub fn locate(&self, x: &[BigRational]) -> PointLocation {
        assert_eq!(x.len(), self.rank);
        let mut best: Option<(BigRational, ConeId)> = None;
        for &id in &self.maximal {
            let g = &self.max_geom[&id.0];
            let num: BigRational = g
                .normal
                .iter()
                .zip(x)
                .map(|(a, v)| BigRational::from_integer(a.clone()) * v)
                .sum();
            let val = num / BigRational::from_integer(g.offset.clone());
            if best.as_ref().is_none_or(|(b, _)| &val > b) {
                best = Some((val, id));
            }
        }
        let (degree, maximal) = best.expect("complete fan has maximal cones");
        let lambda = self.max_geom[&maximal.0].inverse.mat_vec(x);
        let minimal_rays: Vec<usize> = self
            .cone_rays(maximal)
            .iter()
            .zip(&lambda)
            .filter(|(_, l)| !l.is_zero())
            .map(|(&r, _)| r)
            .collect();
        let minimal = self
            .lookup(&minimal_rays)
            .expect("support of a located point is a face of the located cone");
        PointLocation {
            degree,
            maximal,
            minimal,
            lambda,
        }
    }

    /// Builds the quotient fan `Sigma(sigma)` with a coordinate system on
    /// `N_Q/(N_sigma)_Q` coming from the Smith normal form of the generator
    /// matrix (the last `codim sigma` rows of `U^{-1}`). Torsion of the
    /// quotient group is discarded; only the rational images matter here.
    pub fn quotient_fan(&self, sigma: ConeId) -> Result<QuotientFanData> {
        let s = self.cone_dim(sigma);
        let c = self.cone_codim(sigma);
        let projection = if s == 0 {
            RatMatrix::identity(self.rank)
        } else {
            let snf = smith_normal_form(&self.generator_matrix(sigma));
            let u_inv = snf
                .u
                .to_rational()
                .inverse()
                .ok_or_else(|| Error::Internal("U not invertible".into()))?;
            RatMatrix::from_rows((s..self.rank).map(|r| u_inv.row(r).to_vec()).collect())
        };

        let link = self.link(sigma);
        let mut ray_ids: Vec<usize> = link
            .iter()
            .flat_map(|&t| self.cone_rays(t).iter().copied())
            .collect();
        ray_ids.sort_unstable();
        ray_ids.dedup();
        let local: HashMap<usize, usize> =
            ray_ids.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let ray_images: Vec<Vec<BigRational>> = ray_ids
            .iter()
            .map(|&r| {
                let x: Vec<BigRational> = self.rays[r]
                    .iter()
                    .map(|v| BigRational::from_integer(v.clone()))
                    .collect();
                projection.mat_vec(&x)
            })
            .collect();

        let star = self.star(sigma);
        let sigma_rays = self.cone_rays(sigma);
        let mut cones: Vec<(Vec<usize>, ConeId)> = star
            .iter()
            .map(|&d| {
                let mut loc: Vec<usize> = self
                    .cone_rays(d)
                    .iter()
                    .filter(|r| !sigma_rays.contains(r))
                    .map(|r| local[r])
                    .collect();
                loc.sort_unstable();
                (loc, d)
            })
            .collect();
        cones.sort_by_key(|(c, _)| (c.len(), c.clone()));
        for w in cones.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Internal(
                    "distinct star cones project to the same quotient cone".into(),
                ));
            }
        }
        let maximal: Vec<usize> = cones
            .iter()
            .enumerate()
            .filter(|(_, (lc, _))| lc.len() == c)
            .map(|(i, _)| i)
            .collect();
        for &mi in &maximal {
            let m = RatMatrix::from_columns(
                cones[mi].0.iter().map(|&l| ray_images[l].clone()).collect(),
                c,
            );
            if m.rank() != c {
                return Err(Error::Internal(
                    "projected maximal cone generators are dependent".into(),
                ));
            }
        }
        let (locals, origins): (Vec<Vec<usize>>, Vec<ConeId>) = cones.into_iter().unzip();
        Ok(QuotientFanData {
            base_cone: sigma,
            rank: c,
            ray_ids,
            ray_images,
            cones: locals,
            star_cones: origins,
            maximal,
            complete: self.complete,
            projection,
        })
    }
}

/// The quotient fan `Sigma(sigma)` with its chosen rational coordinates.
/// Cones biject with the cones of `Star(sigma)`; `star_cones` records the
/// correspondence.
#[derive(Debug, Clone)]
pub struct QuotientFanData {
    pub base_cone: ConeId,
    pub rank: usize,
    /// global ray ids of the link rays, sorted
    pub ray_ids: Vec<usize>,
    /// projected markings, parallel to `ray_ids`
    pub ray_images: Vec<Vec<BigRational>>,
    /// sorted local-index cone list (empty cone first)
    pub cones: Vec<Vec<usize>>,
    /// the star cone each quotient cone came from, parallel to `cones`
    pub star_cones: Vec<ConeId>,
    /// indices into `cones` of the top-dimensional ones
    pub maximal: Vec<usize>,
    pub complete: bool,
    /// the linear map used to project, as rows acting on ambient coordinates
    pub projection: RatMatrix,
}

impl QuotientFanData {
    /// Multiplicity of a quotient cone: index of its projected markings in
    /// the saturation lattice of the chosen coordinates.
    pub fn cone_multiplicity(&self, cone: usize) -> BigInt {
        let local = &self.cones[cone];
        if local.is_empty() {
            return BigInt::one();
        }
        let cols: Vec<Vec<BigInt>> = local
            .iter()
            .map(|&l| {
                self.ray_images[l]
                    .iter()
                    .map(|q| {
                        assert!(q.denom().is_one(), "projected marking not integral");
                        q.numer().clone()
                    })
                    .collect()
            })
            .collect();
        if local.len() == self.rank {
            IntMatrix::from_columns(cols, self.rank)
                .determinant()
                .expect("square")
                .abs()
        } else {
            let snf = smith_normal_form(&IntMatrix::from_columns(cols, self.rank));
            snf.diagonal().iter().product::<BigInt>().abs()
        }
    }

    /// Re-expresses the quotient data in different coordinates given by a
    /// unimodular matrix; the algebra downstream must not notice.
    pub fn transformed(&self, w: &IntMatrix) -> QuotientFanData {
        assert!(w.is_unimodular(), "coordinate change must be unimodular");
        let wr = w.to_rational();
        let mut out = self.clone();
        out.ray_images = self
            .ray_images
            .iter()
            .map(|v| wr.mat_vec(v))
            .collect();
        out.projection = wr.mul(&self.projection);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;
    use crate::polytope::LatticePolytope;

    fn fan_of(vs: &[&[i64]]) -> StackyFan {
        let p = LatticePolytope::validate(
            vs.iter()
                .map(|v| v.iter().map(|&c| BigInt::from(c)).collect())
                .collect(),
            None,
        )
        .unwrap();
        StackyFan::from_polytope(&p)
    }

    fn square() -> StackyFan {
        fan_of(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])
    }

    #[test]
    fn segment_fan_structure() {
        let f = fan_of(&[&[1], &[-1]]);
        assert_eq!(f.rank(), 1);
        assert_eq!(f.rays().len(), 2);
        assert_eq!(f.cone_count(), 3); // zero cone + two rays
        assert!(f.is_complete());
        assert_eq!(f.maximal_cones().len(), 2);
    }

    #[test]
    fn square_fan_structure() {
        let f = square();
        assert_eq!(f.rays().len(), 4);
        assert_eq!(f.maximal_cones().len(), 4);
        assert_eq!(f.cone_count(), 9);
    }

    #[test]
    fn non_primitive_marking_is_kept() {
        let f = fan_of(&[&[1, 0], &[0, 2], &[-1, -1]]);
        assert!(f.rays().iter().any(|r| r == &[BigInt::from(0), BigInt::from(2)]));
        let ray = f.cone_id(&[1]).unwrap();
        assert_eq!(f.multiplicity(ray), BigInt::from(2));
    }

    #[test]
    fn star_and_link_of_square_ray() {
        let f = square();
        // ray through (1,1) is global ray 0
        let sigma = f.cone_id(&[0]).unwrap();
        let star = f.star(sigma);
        assert_eq!(star.len(), 3); // the ray and two maximal cones
        let link: Vec<Vec<usize>> = f
            .link(sigma)
            .into_iter()
            .map(|t| f.cone_rays(t).to_vec())
            .collect();
        assert_eq!(link, vec![vec![], vec![1], vec![2]]); // 0, ray(1,-1), ray(-1,1)

        // zero cone: star is everything
        assert_eq!(f.star(f.zero_cone()).len(), f.cone_count());
        // maximal cone: star is itself, link is the zero cone
        let max = f.maximal_cones()[0];
        assert_eq!(f.star(max), vec![max]);
        assert_eq!(f.link(max), vec![f.zero_cone()]);
    }

    #[test]
    fn multiplicities() {
        let f = square();
        for &m in f.maximal_cones() {
            assert_eq!(f.multiplicity(m), BigInt::from(2));
        }
        for r in 0..4 {
            let ray = f.cone_id(&[r]).unwrap();
            assert_eq!(f.multiplicity(ray), BigInt::one());
        }
        assert_eq!(f.multiplicity(f.zero_cone()), BigInt::one());
    }

    #[test]
    fn f_and_h_vectors() {
        let f = square();
        let (fv, hv) = f.f_and_h_vector(f.zero_cone()).unwrap();
        assert_eq!(fv, vec![1, 4, 4]);
        assert_eq!(hv, vec![1, 2, 1]);

        let octa = fan_of(&[
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[0, 0, 1],
            &[0, 0, -1],
        ]);
        let (fv, hv) = octa.f_and_h_vector(octa.zero_cone()).unwrap();
        assert_eq!(fv, vec![1, 6, 12, 8]);
        assert_eq!(hv, vec![1, 3, 3, 1]);

        let max = f.maximal_cones()[0];
        let (fv, hv) = f.f_and_h_vector(max).unwrap();
        assert_eq!(fv, vec![1]);
        assert_eq!(hv, vec![1]);
    }

    #[test]
    fn quotient_of_zero_cone_is_the_fan() {
        let f = square();
        let q = f.quotient_fan(f.zero_cone()).unwrap();
        assert_eq!(q.rank, 2);
        assert_eq!(q.cones.len(), f.cone_count());
        assert_eq!(q.ray_ids, vec![0, 1, 2, 3]);
        // identity coordinates: images equal the markings
        for (r, img) in q.ray_ids.iter().zip(&q.ray_images) {
            let exp: Vec<BigRational> = f.ray(*r)
                .iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect();
            assert_eq!(img, &exp);
        }
    }

    #[test]
    fn quotient_by_ray_of_square() {
        let f = square();
        let sigma = f.cone_id(&[0]).unwrap(); // ray (1,1)
        let q = f.quotient_fan(sigma).unwrap();
        assert_eq!(q.rank, 1);
        assert_eq!(q.ray_ids.len(), 2);
        assert_eq!(q.cones.len(), 3);
        assert!(q.complete);
        // the two projected rays must point in opposite directions
        let a = &q.ray_images[0][0];
        let b = &q.ray_images[1][0];
        assert!(a.is_positive() != b.is_positive());
    }

    #[test]
    fn quotient_by_maximal_cone_is_trivial() {
        let f = square();
        let q = f.quotient_fan(f.maximal_cones()[0]).unwrap();
        assert_eq!(q.rank, 0);
        assert_eq!(q.cones.len(), 1);
        assert!(q.cones[0].is_empty());
    }

    #[test]
    fn h_vector_symmetry_and_sum() {
        for fan in [
            fan_of(&[&[1], &[-1]]),
            square(),
            fan_of(&[&[1, 0], &[0, 2], &[-1, -1]]),
        ] {
            for sigma in fan.cone_ids() {
                let (fv, hv) = fan.f_and_h_vector(sigma).unwrap();
                let c = fan.cone_codim(sigma);
                assert_eq!(hv.len(), c + 1);
                assert_eq!(hv[0], 1);
                for k in 0..=c {
                    assert_eq!(hv[k], hv[c - k], "Dehn-Sommerville");
                }
                // h(1) = f(0) = number of maximal cones in the star
                assert_eq!(hv.iter().sum::<u64>(), fv[c]);
            }
        }
    }

    #[test]
    fn locate_points() {
        let f = square();
        let loc = f.locate(&[rat_int(0), rat_int(0)]);
        assert_eq!(loc.degree, rat_int(0));
        assert_eq!(loc.minimal, f.zero_cone());

        let loc = f.locate(&[rat_int(3), rat_int(1)]);
        assert_eq!(loc.degree, rat_int(3));
        assert_eq!(f.cone_rays(loc.minimal), &[0, 1]); // cone{(1,1),(1,-1)}

        let loc = f.locate(&[rat_int(1), rat_int(0)]);
        assert_eq!(loc.degree, rat_int(1));
        assert_eq!(loc.support(&f).len(), 2);
    }
}
