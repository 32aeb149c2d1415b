//! The Artinian quotient `H(Sigma) = A(Sigma) / m A(Sigma)` of the algebra
//! of conewise polynomial functions, presented through the Stanley-Reisner
//! ring: monomials on the rays whose support spans a cone, modulo the linear
//! system of parameters `theta_j = sum_rho <t_j, v_rho> x_rho`.
//!
//! Built degree by degree with exact linear algebra; the graded dimensions
//! are checked against the h-vector on construction. On top of the ring
//! live the evaluation map (normalized by cone multiplicities), the pairing
//! `Q`, the Lefschetz operator, and the monodromy filtration of a nilpotent
//! operator - everything needed to certify the package of hard Lefschetz,
//! Hodge-Riemann positivity and weight-filtration statements on each
//! quotient fan.

use std::collections::{BTreeMap, HashMap, HashSet};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::exact::{solve_exact, IntMatrix, RatMatrix, SpanReducer};
use crate::fan::{QuotientFanData, StackyFan};
use crate::{Error, Result};

type Monomial = Vec<u32>;

/// A homogeneous class, stored in the chosen basis of its degree.
/// Degrees above the fan rank are identically zero and carry no coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub degree: usize,
    pub coords: Vec<BigRational>,
}

impl Class {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

#[derive(Debug, Clone)]
pub struct HRing {
    dim: usize,
    rays: Vec<Vec<BigRational>>,
    cone_set: HashSet<Vec<usize>>,
    /// per degree 0..=dim
    monomials: Vec<Vec<Monomial>>,
    mono_index: Vec<HashMap<Monomial, usize>>,
    reducers: Vec<SpanReducer>,
    /// per degree: monomial indices forming the basis of `H^d`
    basis: Vec<Vec<usize>>,
    /// evaluation functional scale on the 1-dimensional top degree
    eval_scale: BigRational,
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    // positive integer vectors of length `parts` summing to `total`
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; parts];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let parts = cur.len();
        if pos == parts - 1 {
            if left >= 1 {
                cur[pos] = left;
                out.push(cur.clone());
            }
            return;
        }
        let max = left.saturating_sub((parts - pos - 1) as u32);
        for v in 1..=max {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
    }
    rec(0, total, &mut cur, &mut out);
    out
}

fn support(mono: &Monomial) -> Vec<usize> {
    mono.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, _)| i)
        .collect()
}

impl HRing {
    /// Builds `H` for a simplicial fan presentation. `maximal` indexes into
    /// `cones`; `mults` are the multiplicities of the maximal cones (for the
    /// evaluation normalization); `expected_h` is asserted degree by degree.
    pub fn build(
        dim: usize,
        rays: Vec<Vec<BigRational>>,
        cones: &[Vec<usize>],
        maximal: &[usize],
        mults: &[BigInt],
        expected_h: &[u64],
    ) -> Result<HRing> {
        let cone_set: HashSet<Vec<usize>> = cones.iter().cloned().collect();
        if !cone_set.contains(&Vec::new()) {
            return Err(Error::Internal("cone list is missing the zero cone".into()));
        }
        let nonempty: Vec<&Vec<usize>> = cones.iter().filter(|c| !c.is_empty()).collect();

        let mut monomials: Vec<Vec<Monomial>> = Vec::with_capacity(dim + 1);
        let mut mono_index: Vec<HashMap<Monomial, usize>> = Vec::with_capacity(dim + 1);
        for d in 0..=dim {
            let mut list: Vec<Monomial> = Vec::new();
            if d == 0 {
                list.push(vec![0; rays.len()]);
            } else {
                for cone in &nonempty {
                    if cone.len() > d {
                        continue;
                    }
                    for comp in compositions(d as u32, cone.len()) {
                        let mut mono = vec![0u32; rays.len()];
                        for (&ray, &e) in cone.iter().zip(&comp) {
                            mono[ray] = e;
                        }
                        list.push(mono);
                    }
                }
            }
            let index: HashMap<Monomial, usize> =
                list.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
            monomials.push(list);
            mono_index.push(index);
        }

        let mut reducers: Vec<SpanReducer> = Vec::with_capacity(dim + 1);
        let mut basis: Vec<Vec<usize>> = Vec::with_capacity(dim + 1);
        for d in 0..=dim {
            let mut ideal_vectors: Vec<Vec<BigRational>> = Vec::new();
            if d >= 1 {
                for mono in &monomials[d - 1] {
                    for j in 0..dim {
                        let mut vec = vec![BigRational::zero(); monomials[d].len()];
                        let mut nonzero = false;
                        for (i, ray) in rays.iter().enumerate() {
                            if ray[j].is_zero() {
                                continue;
                            }
                            let mut prod = mono.clone();
                            prod[i] += 1;
                            if let Some(&idx) = mono_index[d].get(&prod) {
                                vec[idx] += &ray[j];
                                nonzero = true;
                            }
                        }
                        if nonzero {
                            ideal_vectors.push(vec);
                        }
                    }
                }
            }
            let red = SpanReducer::from_vectors(monomials[d].len(), ideal_vectors);
            let b = red.non_pivots();
            if b.len() as u64 != expected_h[d] {
                return Err(Error::Internal(format!(
                    "dim H^{d} = {} but h_{d} = {}",
                    b.len(),
                    expected_h[d]
                )));
            }
            reducers.push(red);
            basis.push(b);
        }

        let mut ring = HRing {
            dim,
            rays,
            cone_set,
            monomials,
            mono_index,
            reducers,
            basis,
            eval_scale: BigRational::one(),
        };

        // evaluation: the squarefree monomial of a maximal cone evaluates to
        // 1/multiplicity; consistency across maximal cones is asserted, not
        // assumed
        if ring.basis[dim].len() != 1 {
            return Err(Error::Internal(format!(
                "top degree of a complete fan must be one-dimensional, got {}",
                ring.basis[dim].len()
            )));
        }
        let mut scale: Option<BigRational> = None;
        for (&mc, mult) in maximal.iter().zip(mults) {
            let mut mono = vec![0u32; ring.rays.len()];
            for &r in &cones[mc] {
                mono[r] = 1;
            }
            let class = ring.class_from_monomial(dim, &mono)?;
            let c = class.coords[0].clone();
            if c.is_zero() {
                return Err(Error::Internal(
                    "maximal cone monomial vanishes in top degree".into(),
                ));
            }
            let target = BigRational::one() / BigRational::from_integer(mult.clone());
            match &scale {
                None => scale = Some(target / c),
                Some(s) => {
                    if &c * s != target {
                        return Err(Error::Internal(format!(
                            "evaluation normalization inconsistent on maximal cone {:?}",
                            cones[mc]
                        )));
                    }
                }
            }
        }
        ring.eval_scale = scale.ok_or_else(|| Error::Internal("no maximal cones".into()))?;
        Ok(ring)
    }

    /// `H` of the full stacky fan.
    pub fn from_stacky_fan(fan: &StackyFan) -> Result<HRing> {
        let q = fan.quotient_fan(fan.zero_cone())?;
        Self::from_quotient(fan, &q)
    }

    /// `H` of a quotient fan, with dimensions checked against the h-vector
    /// of the base cone.
    pub fn from_quotient(fan: &StackyFan, q: &QuotientFanData) -> Result<HRing> {
        let (_, h) = fan.f_and_h_vector(q.base_cone)?;
        let mults: Vec<BigInt> = q.maximal.iter().map(|&m| q.cone_multiplicity(m)).collect();
        Self::build(
            q.rank,
            q.ray_images.clone(),
            &q.cones,
            &q.maximal,
            &mults,
            &h,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn h_dims(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.len()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.basis.iter().map(|b| b.len()).sum()
    }

    /// Exponent vectors of the monomials chosen as the basis of `H^d`.
    pub fn basis_monomials(&self, d: usize) -> Vec<&Monomial> {
        self.basis[d].iter().map(|&i| &self.monomials[d][i]).collect()
    }

    pub fn zero_class(&self, degree: usize) -> Class {
        let len = if degree <= self.dim {
            self.basis[degree].len()
        } else {
            0
        };
        Class {
            degree,
            coords: vec![BigRational::zero(); len],
        }
    }

    pub fn one(&self) -> Class {
        let mut c = self.zero_class(0);
        c.coords[0] = BigRational::one();
        c
    }

    /// Class of a single monomial, reduced into the stored basis.
    pub fn class_from_monomial(&self, degree: usize, mono: &Monomial) -> Result<Class> {
        if degree > self.dim {
            return Ok(self.zero_class(degree));
        }
        let mut sr = vec![BigRational::zero(); self.monomials[degree].len()];
        match self.mono_index[degree].get(mono) {
            Some(&i) => sr[i] = BigRational::one(),
            None => {
                // non-cofacial support: the zero class
                if self.cone_set.contains(&support(mono)) {
                    return Err(Error::Internal("cofacial monomial missing from index".into()));
                }
                return Ok(self.zero_class(degree));
            }
        }
        Ok(self.reduce_to_class(degree, sr))
    }

    /// The degree-one class of a single ray variable.
    pub fn ray_class(&self, local_ray: usize) -> Result<Class> {
        let mut mono = vec![0u32; self.rays.len()];
        mono[local_ray] = 1;
        self.class_from_monomial(1, &mono)
    }

    /// A degree-one class `sum coeffs[i] x_i`.
    pub fn linear_class(&self, coeffs: &[BigRational]) -> Result<Class> {
        assert_eq!(coeffs.len(), self.rays.len());
        let mut acc = self.zero_class(1);
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let rc = self.ray_class(i)?;
            acc = self.add(&acc, &self.scale(&rc, c));
        }
        Ok(acc)
    }

    fn reduce_to_class(&self, degree: usize, sr: Vec<BigRational>) -> Class {
        let reduced = self.reducers[degree].reduce(sr);
        Class {
            degree,
            coords: self.basis[degree].iter().map(|&i| reduced[i].clone()).collect(),
        }
    }

    pub fn add(&self, a: &Class, b: &Class) -> Class {
        assert_eq!(a.degree, b.degree, "cannot add across degrees");
        Class {
            degree: a.degree,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale(&self, a: &Class, c: &BigRational) -> Class {
        Class {
            degree: a.degree,
            coords: a.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// Product in `H`: convolve monomial representatives, drop non-cofacial
    /// products, reduce.
    pub fn multiply(&self, a: &Class, b: &Class) -> Class {
        let d = a.degree + b.degree;
        if d > self.dim {
            return self.zero_class(d);
        }
        let mut sr = vec![BigRational::zero(); self.monomials[d].len()];
        for (ia, ca) in a.coords.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ma = &self.monomials[a.degree][self.basis[a.degree][ia]];
            for (ib, cb) in b.coords.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let mb = &self.monomials[b.degree][self.basis[b.degree][ib]];
                let prod: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                if let Some(&idx) = self.mono_index[d].get(&prod) {
                    sr[idx] += ca * cb;
                }
            }
        }
        self.reduce_to_class(d, sr)
    }

    /// Evaluation of a top-degree class.
    pub fn evaluate(&self, top: &Class) -> Result<BigRational> {
        if top.degree != self.dim {
            return Err(Error::Internal(format!(
                "evaluation needs degree {} but got {}",
                self.dim, top.degree
            )));
        }
        Ok(&top.coords[0] * &self.eval_scale)
    }

    /// `Q(a, b) = (-1)^{deg a} <a b>`, zero off complementary degrees.
    pub fn pairing_q(&self, a: &Class, b: &Class) -> Result<BigRational> {
        if a.degree + b.degree != self.dim {
            return Ok(BigRational::zero());
        }
        let v = self.evaluate(&self.multiply(a, b))?;
        Ok(if a.degree.is_multiple_of(2) { v } else { -v })
    }

    /// Matrix of multiplication by a degree-one class, `H^d -> H^{d+1}`.
    pub fn mult_matrix(&self, l: &Class, d: usize) -> RatMatrix {
        assert_eq!(l.degree, 1);
        let rows = if d < self.dim {
            self.basis[d + 1].len()
        } else {
            0
        };
        let mut cols = Vec::new();
        for i in 0..self.basis[d].len() {
            let mut e = self.zero_class(d);
            e.coords[i] = BigRational::one();
            cols.push(self.multiply(l, &e).coords);
        }
        RatMatrix::from_columns(cols, rows)
    }

    /// Matrix of `l^steps : H^d -> H^{d+steps}`.
    pub fn power_matrix(&self, l: &Class, d: usize, steps: usize) -> RatMatrix {
        let mut m = RatMatrix::identity(self.basis[d].len());
        for s in 0..steps {
            m = self.mult_matrix(l, d + s).mul(&m);
        }
        m
    }

    /// Matrix of `Q` on `H^k x H^{c-k}` in the stored bases.
    pub fn pairing_matrix(&self, k: usize) -> Result<RatMatrix> {
        let ck = self.dim - k;
        let mut m = RatMatrix::zeros(self.basis[k].len(), self.basis[ck].len());
        for i in 0..self.basis[k].len() {
            let mut a = self.zero_class(k);
            a.coords[i] = BigRational::one();
            for j in 0..self.basis[ck].len() {
                let mut b = self.zero_class(ck);
                b.coords[j] = BigRational::one();
                m.set(i, j, self.pairing_q(&a, &b)?);
            }
        }
        Ok(m)
    }

    /// The operator of multiplication by `l` on all of `H`, as one matrix in
    /// the degree-concatenated basis.
    pub fn total_mult_matrix(&self, l: &Class) -> RatMatrix {
        let total = self.total_dim();
        let offsets: Vec<usize> = {
            let mut acc = 0;
            let mut v = Vec::new();
            for d in 0..=self.dim {
                v.push(acc);
                acc += self.basis[d].len();
            }
            v
        };
        let mut m = RatMatrix::zeros(total, total);
        for d in 0..self.dim {
            let block = self.mult_matrix(l, d);
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    m.set(offsets[d + 1] + r, offsets[d] + c, block.at(r, c).clone());
                }
            }
        }
        m
    }

    /// Degree offsets into the degree-concatenated basis.
    pub fn degree_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        let mut v = Vec::new();
        for d in 0..=self.dim {
            v.push(acc);
            acc += self.basis[d].len();
        }
        v
    }
}

/// The class of the gauge `deg_P` on a quotient fan: pick a linear form `s`
/// with `s(v_rho) = 1` on the base cone's markings; then `deg_P - s`
/// descends, with value `1 - s(v_rho)` on each link ray. For the zero cone
/// this is just `sum_rho x_rho`.
pub fn gauge_class(fan: &StackyFan, q: &QuotientFanData, h: &HRing) -> Result<Class> {
    let base_rays = fan.cone_rays(q.base_cone);
    let n = fan.rank();
    let s: Vec<BigRational> = if base_rays.is_empty() {
        vec![BigRational::zero(); n]
    } else {
        let gt = RatMatrix::from_rows(
            base_rays
                .iter()
                .map(|&r| {
                    fan.ray(r)
                        .iter()
                        .map(|v| BigRational::from_integer(v.clone()))
                        .collect()
                })
                .collect(),
        );
        let ones = vec![BigRational::one(); base_rays.len()];
        solve_exact(&gt, &ones)
            .ok_or_else(|| Error::Internal("no linear form with s(v)=1 on the cone".into()))?
    };
    let coeffs: Vec<BigRational> = q
        .ray_ids
        .iter()
        .map(|&r| {
            let sv: BigRational = fan
                .ray(r)
                .iter()
                .zip(&s)
                .map(|(v, si)| BigRational::from_integer(v.clone()) * si)
                .sum();
            BigRational::one() - sv
        })
        .collect();
    h.linear_class(&coeffs)
}

#[derive(Debug, Clone)]
pub struct LefschetzReport {
    /// (k, computed rank of `l^{c-2k}`, expected `h_k`)
    pub ranks: Vec<(usize, usize, u64)>,
    pub pass: bool,
}

/// Checks `rank(l^{c-2k} : H^k -> H^{c-k}) = h_k` for all `k <= c/2`.
pub fn hard_lefschetz_check(h: &HRing, l: &Class) -> LefschetzReport {
    let c = h.dim();
    let dims = h.h_dims();
    let mut ranks = Vec::new();
    let mut pass = true;
    for k in 0..=c / 2 {
        let m = h.power_matrix(l, k, c - 2 * k);
        let rank = m.rank();
        let expected = dims[k] as u64;
        if rank as u64 != expected {
            pass = false;
        }
        ranks.push((k, rank, expected));
    }
    LefschetzReport { ranks, pass }
}

#[derive(Debug, Clone)]
pub struct HodgeRiemannCase {
    pub k: usize,
    pub primitive_dim: usize,
    pub minors: Vec<BigRational>,
    pub positive: bool,
}

#[derive(Debug, Clone)]
pub struct HodgeRiemannReport {
    pub cases: Vec<HodgeRiemannCase>,
    pub pass: bool,
}

/// Positive definiteness of `(-1)^k <l^{c-2k} h h>` on the primitive part
/// `ker(l^{c-2k+1}) of H^k`, certified by exact leading principal minors.
pub fn hodge_riemann_check(h: &HRing, l: &Class) -> Result<HodgeRiemannReport> {
    let c = h.dim();
    let mut cases = Vec::new();
    let mut pass = true;
    for k in 0..=c / 2 {
        let prim: Vec<Vec<BigRational>> = if c + 1 - k > c {
            // the power lands beyond the top degree; everything is primitive
            RatMatrix::identity(h.h_dims()[k]).columns()
        } else {
            h.power_matrix(l, k, c - 2 * k + 1).nullspace().columns()
        };
        let dim_p = prim.len();
        let prim_classes: Vec<Class> = prim
            .iter()
            .map(|v| Class {
                degree: k,
                coords: v.clone(),
            })
            .collect();
        // Gram matrix of the Hodge-Riemann form on the primitive basis
        let mut gram = RatMatrix::zeros(dim_p, dim_p);
        for i in 0..dim_p {
            let li = {
                let mut x = prim_classes[i].clone();
                for _ in 0..c - 2 * k {
                    x = h.multiply(l, &x);
                }
                x
            };
            for j in 0..dim_p {
                let val = h.evaluate(&h.multiply(&li, &prim_classes[j]))?;
                gram.set(i, j, if k % 2 == 0 { val } else { -val });
            }
        }
        let mut minors = Vec::new();
        let mut positive = true;
        for t in 1..=dim_p {
            let sub = IntMatrix::from_rows(
                (0..t)
                    .map(|r| {
                        // clear denominators row-wise; positive scaling keeps signs
                        let lcm = (0..t).fold(BigInt::one(), |acc, cidx| {
                            num::integer::lcm(acc, gram.at(r, cidx).denom().clone())
                        });
                        (0..t)
                            .map(|cidx| gram.at(r, cidx).numer() * (&lcm / gram.at(r, cidx).denom()))
                            .collect()
                    })
                    .collect(),
            );
            let det = sub.determinant()?;
            if !det.is_positive() {
                positive = false;
            }
            minors.push(BigRational::from_integer(det));
        }
        if !positive {
            pass = false;
        }
        cases.push(HodgeRiemannCase {
            k,
            primitive_dim: dim_p,
            minors,
            positive,
        });
    }
    Ok(HodgeRiemannReport { cases, pass })
}

/// The monodromy filtration of a nilpotent operator: the unique increasing
/// filtration with `N M_k <= M_{k-2}` and `N^k : Gr_k ~ Gr_{-k}`. Both
/// properties are re-verified on the computed result.
#[derive(Debug, Clone)]
pub struct MonodromyFiltration {
    pub dim: usize,
    subspaces: BTreeMap<i64, Vec<Vec<BigRational>>>,
}

impl MonodromyFiltration {
    /// Basis of `M_k` (empty below the bottom, full basis above the top).
    pub fn subspace(&self, k: i64) -> Vec<Vec<BigRational>> {
        let lo = -(self.dim as i64 + 1);
        let k = k.clamp(lo, self.dim as i64);
        self.subspaces.get(&k).cloned().unwrap_or_default()
    }

    pub fn subspace_dim(&self, k: i64) -> usize {
        self.subspace(k).len()
    }

    pub fn graded_dim(&self, k: i64) -> usize {
        self.subspace_dim(k) - self.subspace_dim(k - 1)
    }
}

pub fn monodromy_filtration(n_op: &RatMatrix) -> Result<MonodromyFiltration> {
    if n_op.rows() != n_op.cols() {
        return Err(Error::NonSquare {
            rows: n_op.rows(),
            cols: n_op.cols(),
        });
    }
    let d = n_op.rows();
    // powers N^0..N^{d+1}
    let mut powers = vec![RatMatrix::identity(d)];
    for j in 1..=d + 1 {
        powers.push(n_op.mul(&powers[j - 1]));
    }
    let top = &powers[d + 1];
    for r in 0..d {
        for c in 0..d {
            if !top.at(r, c).is_zero() {
                return Err(Error::Internal("operator is not nilpotent".into()));
            }
        }
    }
    let kernels: Vec<Vec<Vec<BigRational>>> =
        (0..=d + 1).map(|j| powers[j].nullspace().columns()).collect();
    let images: Vec<Vec<Vec<BigRational>>> = (0..=d + 1)
        .map(|j| {
            SpanReducer::from_vectors(d, powers[j].columns())
                .basis_rows()
                .to_vec()
        })
        .collect();

    let mut subspaces = BTreeMap::new();
    for k in -(d as i64 + 1)..=(d as i64) {
        let mut gens: Vec<Vec<BigRational>> = Vec::new();
        for j in 0..=d as i64 {
            let e = k + j + 1;
            if e <= 0 {
                continue; // ker N^{e<=0} = 0
            }
            let e = (e as usize).min(d + 1);
            let meet = crate::exact::intersect_spans(d, &kernels[e], &images[j as usize]);
            gens.extend(meet);
        }
        let red = SpanReducer::from_vectors(d, gens);
        subspaces.insert(k, red.basis_rows().to_vec());
    }
    let filt = MonodromyFiltration { dim: d, subspaces };

    // defining property 1: N M_k inside M_{k-2}
    for k in -(d as i64)..=(d as i64) {
        let lower = SpanReducer::from_vectors(d, filt.subspace(k - 2));
        for v in filt.subspace(k) {
            let nv = n_op.mat_vec(&v);
            if !lower.contains(&nv) {
                return Err(Error::Internal(format!(
                    "monodromy filtration: N M_{k} escapes M_{}",
                    k - 2
                )));
            }
        }
    }
    // defining property 2: N^k induces Gr_k ~ Gr_{-k}
    for k in 1..=(d as i64) {
        let gk = filt.graded_dim(k);
        if gk != filt.graded_dim(-k) {
            return Err(Error::Internal(format!(
                "monodromy filtration: dim Gr_{k} != dim Gr_{}",
                -k
            )));
        }
        if gk == 0 {
            continue;
        }
        let below = filt.subspace(-k - 1);
        let below_dim = below.len();
        let mut vecs = below;
        for v in filt.subspace(k) {
            let mut img = v;
            for _ in 0..k {
                img = n_op.mat_vec(&img);
            }
            vecs.push(img);
        }
        let rank = SpanReducer::from_vectors(d, vecs).rank();
        if rank != below_dim + gk {
            return Err(Error::Internal(format!(
                "monodromy filtration: N^{k} is not an isomorphism Gr_{k} -> Gr_{}",
                -k
            )));
        }
    }
    Ok(filt)
}

/// Checks that the monodromy filtration of the Lefschetz operator reproduces
/// the degree filtration: `M(l)_{2k-c} = span of degrees >= c-k`.
pub fn weight_filtration_check(h: &HRing, l: &Class) -> Result<()> {
    let c = h.dim();
    let total = h.total_dim();
    let filt = monodromy_filtration(&h.total_mult_matrix(l))?;
    let offsets = h.degree_offsets();
    let dims = h.h_dims();
    for k in 0..=c as i64 {
        let m = filt.subspace(2 * k - c as i64);
        // expected: unit vectors of all degrees >= c-k
        let mut expected: Vec<Vec<BigRational>> = Vec::new();
        for d in (c - k as usize)..=c {
            for i in 0..dims[d] {
                let mut v = vec![BigRational::zero(); total];
                v[offsets[d] + i] = BigRational::one();
                expected.push(v);
            }
        }
        let red_m = SpanReducer::from_vectors(total, m.clone());
        let red_e = SpanReducer::from_vectors(total, expected.clone());
        if red_m.rank() != red_e.rank()
            || !expected.iter().all(|v| red_m.contains(v))
            || !m.iter().all(|v| red_e.contains(v))
        {
            return Err(Error::Internal(format!(
                "weight filtration mismatch at k = {k}"
            )));
        }
        // odd steps coincide with the even ones below
        let odd = filt.subspace_dim(2 * k - c as i64 + 1);
        if k < c as i64 && odd != red_m.rank() && 2 * k + 1 - (c as i64) <= c as i64 {
            return Err(Error::Internal(format!(
                "weight filtration has an odd jump at k = {k}"
            )));
        }
    }
    Ok(())
}
