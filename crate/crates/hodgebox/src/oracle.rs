//! Independent verification through the Newton-graded Jacobian ring.
//!
//! For `f = sum_v a_v t^v` the graded ring `Gr K[t^{+-1}]` has basis `t^w`
//! with the cofacial product rule: `t^w t^v = t^{w+v}` when the minimal cone
//! of `w` and the ray of `v` span a cone, zero otherwise. Multiplication by
//! the logarithmic partials `t_i df/dt_i` preserves the box class of `w`, so
//! the graded quotient splits into blocks indexed by box elements. This
//! module enumerates the graded basis, computes every block quotient with
//! exact rank computations, builds the `[f]` operator per block, and then
//! re-derives every number the combinatorial side predicted: block
//! dimensions against h-vectors, the spectrum, hard Lefschetz ranks, the
//! monodromy filtration, the opposite-filtration splitting, and an explicit
//! change of basis conjugating `[f]` into multiplication by the gauge class.

use std::collections::{BTreeMap, HashMap};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use rand::Rng;
use rand::SeedableRng;

use crate::boxes::{box_of_fan, BoxCache};
use crate::conewise::{gauge_class, monodromy_filtration, HRing};
use crate::diamond::{assemble, DiamondSet, Spectrum};
use crate::exact::{format_rational, rank_mod_p, RatMatrix, SpanReducer};
use crate::fan::StackyFan;
use crate::par;
use crate::polytope::LatticePolytope;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffProvenance {
    AllOnes,
    User,
    Seeded(u64),
}

impl CoeffProvenance {
    pub fn label(&self) -> String {
        match self {
            CoeffProvenance::AllOnes => "all-ones".to_string(),
            CoeffProvenance::User => "user".to_string(),
            CoeffProvenance::Seeded(s) => format!("seeded-random({s})"),
        }
    }
}

/// Nonzero coefficient `a_v` per vertex, tagged with where it came from.
#[derive(Debug, Clone)]
pub struct CoefficientAssignment {
    pub values: Vec<BigRational>,
    pub provenance: CoeffProvenance,
}

impl CoefficientAssignment {
    pub fn all_ones(count: usize) -> Self {
        CoefficientAssignment {
            values: vec![BigRational::one(); count],
            provenance: CoeffProvenance::AllOnes,
        }
    }

    pub fn user(values: Vec<BigRational>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| v.is_zero()) {
            return Err(Error::BadInput(format!("coefficient #{i} is zero")));
        }
        Ok(CoefficientAssignment {
            values,
            provenance: CoeffProvenance::User,
        })
    }

    /// Reproducible nonzero integer coefficients in `[-9, 9]`.
    pub fn seeded(count: usize, seed: u64) -> Self {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let values = (0..count)
            .map(|_| loop {
                let v: i64 = rng.random_range(-9..=9);
                if v != 0 {
                    break BigRational::from_integer(BigInt::from(v));
                }
            })
            .collect();
        CoefficientAssignment {
            values,
            provenance: CoeffProvenance::Seeded(seed),
        }
    }
}

/// One enumerated lattice point with its minimal cone.
#[derive(Debug, Clone)]
pub struct MonomialPoint {
    pub point: Vec<BigInt>,
    pub min_cone_rays: Vec<usize>,
}

/// All lattice points of degree `<= rank`, grouped by box class and level:
/// a point `w` with `{w} = u` sits at level `k = deg(w) - deg(u)`.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    pub rank: usize,
    /// per box element (same order as the box cache): levels of points
    pub levels: Vec<Vec<Vec<MonomialPoint>>>,
    point_pos: HashMap<Vec<BigInt>, (usize, usize, usize)>,
}

impl GradedBasis {
    pub fn position(&self, point: &[BigInt]) -> Option<(usize, usize, usize)> {
        self.point_pos.get(point).copied()
    }

    pub fn level_points(&self, class: usize, k: usize) -> &[MonomialPoint] {
        &self.levels[class][k]
    }

    /// Lattice points of each exact degree, summed over classes.
    pub fn degree_counts(&self, cache: &BoxCache) -> BTreeMap<BigRational, usize> {
        let mut out = BTreeMap::new();
        for (ci, levels) in self.levels.iter().enumerate() {
            let base = &cache.element(ci).degree;
            for (k, pts) in levels.iter().enumerate() {
                if pts.is_empty() {
                    continue;
                }
                let beta = base + BigRational::from_integer(BigInt::from(k as i64));
                *out.entry(beta).or_insert(0) += pts.len();
            }
        }
        out
    }
}

/// Scans the integer bounding box of `rank * P` and buckets every point of
/// degree `<= rank` into its box class and level.
pub fn graded_basis(fan: &StackyFan, cache: &BoxCache) -> Result<GradedBasis> {
    let n = fan.rank();
    let nn = BigInt::from(n as i64);
    let mut lo = vec![BigInt::zero(); n];
    let mut hi = vec![BigInt::zero(); n];
    for ray in fan.rays() {
        for (i, v) in ray.iter().enumerate() {
            let scaled = v * &nn;
            if scaled < lo[i] {
                lo[i] = scaled.clone();
            }
            if scaled > hi[i] {
                hi[i] = scaled;
            }
        }
    }
    let ranges: Vec<(i64, i64)> = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| {
            (
                i64::try_from(l).expect("bound fits in i64"),
                i64::try_from(h).expect("bound fits in i64"),
            )
        })
        .collect();

    // walk the box in slices of the first coordinate, in parallel
    type ScanItem = (Vec<BigInt>, usize, usize); // (point, class, level)
    let firsts: Vec<i64> = (ranges[0].0..=ranges[0].1).collect();
    let max_deg = BigRational::from_integer(nn.clone());
    let slices: Vec<Result<Vec<ScanItem>>> = par::map_collect(firsts, |x0| {
        let mut out = Vec::new();
        let mut cursor = vec![0i64; n];
        cursor[0] = x0;
        fn walk(
            dim: usize,
            cursor: &mut Vec<i64>,
            ranges: &[(i64, i64)],
            fan: &StackyFan,
            cache: &BoxCache,
            max_deg: &BigRational,
            out: &mut Vec<(Vec<BigInt>, usize, usize)>,
        ) -> Result<()> {
            if dim == cursor.len() {
                let point: Vec<BigInt> = cursor.iter().map(|&c| BigInt::from(c)).collect();
                let xq: Vec<BigRational> = point
                    .iter()
                    .map(|v| BigRational::from_integer(v.clone()))
                    .collect();
                let loc = fan.locate(&xq);
                if &loc.degree > max_deg {
                    return Ok(());
                }
                // box class from the fractional parts of the coordinates
                let frac_deg: BigRational = loc
                    .lambda
                    .iter()
                    .map(|l| l - l.floor())
                    .sum();
                let mut frac_point = vec![BigRational::zero(); cursor.len()];
                for (&ray, l) in fan.cone_rays(loc.maximal).iter().zip(&loc.lambda) {
                    let fr = l - l.floor();
                    if fr.is_zero() {
                        continue;
                    }
                    for (p, v) in frac_point.iter_mut().zip(fan.ray(ray)) {
                        *p += &fr * BigRational::from_integer(v.clone());
                    }
                }
                let frac_int: Vec<BigInt> = frac_point
                    .iter()
                    .map(|q| {
                        debug_assert!(q.denom().is_one());
                        q.numer().clone()
                    })
                    .collect();
                let class = cache.index_of(&frac_int).ok_or_else(|| {
                    Error::Internal(format!("fractional part {frac_int:?} not in box"))
                })?;
                let level = &loc.degree - &frac_deg;
                if !level.denom().is_one() || level.is_negative() {
                    return Err(Error::Internal(format!(
                        "level {level} of {point:?} is not a nonnegative integer"
                    )));
                }
                let level = usize::try_from(level.numer()).expect("small level");
                out.push((point, class, level));
                return Ok(());
            }
            for v in ranges[dim].0..=ranges[dim].1 {
                cursor[dim] = v;
                walk(dim + 1, cursor, ranges, fan, cache, max_deg, out)?;
            }
            Ok(())
        }
        walk(1, &mut cursor, &ranges, fan, cache, &max_deg, &mut out)?;
        Ok(out)
    });

    let mut levels: Vec<Vec<Vec<MonomialPoint>>> = vec![Vec::new(); cache.len()];
    let mut all: Vec<(Vec<BigInt>, usize, usize)> = Vec::new();
    for s in slices {
        all.extend(s?);
    }
    all.sort_by(|a, b| a.0.cmp(&b.0));
    for (point, class, level) in all {
        if levels[class].len() <= level {
            levels[class].resize(level + 1, Vec::new());
        }
        let xq: Vec<BigRational> = point
            .iter()
            .map(|v| BigRational::from_integer(v.clone()))
            .collect();
        let min_cone_rays = fan.cone_rays(fan.locate(&xq).minimal).to_vec();
        levels[class][level].push(MonomialPoint {
            point,
            min_cone_rays,
        });
    }
    let mut point_pos = HashMap::new();
    for (ci, lv) in levels.iter().enumerate() {
        for (k, pts) in lv.iter().enumerate() {
            for (pos, p) in pts.iter().enumerate() {
                point_pos.insert(p.point.clone(), (ci, k, pos));
            }
        }
    }
    Ok(GradedBasis {
        rank: n,
        levels,
        point_pos,
    })
}

impl GradedBasis {
    /// Matrix of multiplication by `sum_rho weights[rho] t^{v_rho}` from
    /// level `k` to level `k+1` of one class, in the ambient point bases.
    /// Off-block targets are an internal error: the product rule preserves
    /// the box class.
    pub fn weighted_mult_matrix(
        &self,
        fan: &StackyFan,
        weights: &[BigRational],
        class: usize,
        k: usize,
    ) -> Result<RatMatrix> {
        let from = &self.levels[class][k];
        let to_len = self
            .levels[class]
            .get(k + 1)
            .map(|v| v.len())
            .unwrap_or(0);
        let mut m = RatMatrix::zeros(to_len, from.len());
        for (col, w) in from.iter().enumerate() {
            for (ray, weight) in weights.iter().enumerate() {
                if weight.is_zero() {
                    continue;
                }
                let mut union = w.min_cone_rays.clone();
                if !union.contains(&ray) {
                    union.push(ray);
                    union.sort_unstable();
                }
                if !fan.is_cone(&union) {
                    continue; // not cofacial: the product is zero
                }
                let target: Vec<BigInt> =
                    w.point.iter().zip(fan.ray(ray)).map(|(a, b)| a + b).collect();
                match self.position(&target) {
                    Some((ci, kk, pos)) => {
                        if ci != class || kk != k + 1 {
                            return Err(Error::Internal(
                                "multiplication left its box class block".into(),
                            ));
                        }
                        let cur = m.at(pos, col) + weight;
                        m.set(pos, col, cur);
                    }
                    None => {
                        return Err(Error::Internal(format!(
                            "product point {target:?} missing from the graded basis"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    /// Multiplication by `t_i df/dt_i` (weights `v_i a_v`).
    pub fn log_partial_matrix(
        &self,
        fan: &StackyFan,
        a: &CoefficientAssignment,
        i: usize,
        class: usize,
        k: usize,
    ) -> Result<RatMatrix> {
        let weights: Vec<BigRational> = fan
            .rays()
            .iter()
            .zip(&a.values)
            .map(|(ray, av)| BigRational::from_integer(ray[i].clone()) * av)
            .collect();
        self.weighted_mult_matrix(fan, &weights, class, k)
    }

    /// Multiplication by `f` itself (weights `a_v`).
    pub fn f_mult_matrix(
        &self,
        fan: &StackyFan,
        a: &CoefficientAssignment,
        class: usize,
        k: usize,
    ) -> Result<RatMatrix> {
        self.weighted_mult_matrix(fan, &a.values, class, k)
    }
}

/// The graded Jacobian quotient of one box class.
#[derive(Debug, Clone)]
pub struct ClassBlock {
    pub box_index: usize,
    pub base_degree: BigRational,
    /// quotient dimension per level
    pub dims: Vec<usize>,
    /// per level: positions (into the level's point list) of the monomials
    /// chosen as quotient representatives
    pub reps: Vec<Vec<usize>>,
    /// `[f]` between consecutive level quotients
    pub f_maps: Vec<RatMatrix>,
    reducers: Vec<SpanReducer>,
}

impl ClassBlock {
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Reduce an ambient level vector to quotient coordinates.
    pub fn reduce(&self, k: usize, v: Vec<BigRational>) -> Vec<BigRational> {
        let r = self.reducers[k].reduce(v);
        self.reps[k].iter().map(|&p| r[p].clone()).collect()
    }

    /// The block operator `[f]` on the direct sum of the level quotients.
    pub fn total_f_matrix(&self) -> RatMatrix {
        let total = self.total_dim();
        let mut offsets = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for d in &self.dims {
            offsets.push(acc);
            acc += d;
        }
        let mut m = RatMatrix::zeros(total, total);
        for (k, f) in self.f_maps.iter().enumerate() {
            for r in 0..f.rows() {
                for c in 0..f.cols() {
                    m.set(offsets[k + 1] + r, offsets[k] + c, f.at(r, c).clone());
                }
            }
        }
        m
    }
}

/// The full graded Jacobian data.
#[derive(Debug, Clone)]
pub struct GradedQuotient {
    pub rank: usize,
    pub expected_milnor: BigInt,
    pub blocks: Vec<ClassBlock>,
    pub total: BigInt,
    pub per_degree: BTreeMap<BigRational, u64>,
    /// (prime, all mod-p ranks agreed with the exact ones)
    pub precheck: Option<(u32, bool)>,
}

impl GradedQuotient {
    pub fn spectrum(&self, cache: &BoxCache) -> Spectrum {
        let mut s = Spectrum::default();
        for block in &self.blocks {
            let base = &cache.element(block.box_index).degree;
            for (k, &d) in block.dims.iter().enumerate() {
                if d > 0 {
                    s.add(
                        base + BigRational::from_integer(BigInt::from(k as i64)),
                        d as u64,
                    );
                }
            }
        }
        s
    }
}

/// Computes the block quotients: per level, the span of the logarithmic
/// partials' images is eliminated exactly and the surviving monomials form
/// the representative basis. Blocks are processed in parallel.
pub fn graded_jacobian(
    p: &LatticePolytope,
    fan: &StackyFan,
    cache: &BoxCache,
    basis: &GradedBasis,
    a: &CoefficientAssignment,
    prime: Option<u32>,
) -> Result<GradedQuotient> {
    let n = fan.rank();
    let class_indices: Vec<usize> = (0..cache.len()).collect();
    let built: Vec<Result<(ClassBlock, bool)>> = par::map_collect(class_indices, |ci| {
        let levels = &basis.levels[ci];
        let mut reducers: Vec<SpanReducer> = Vec::with_capacity(levels.len());
        let mut dims = Vec::with_capacity(levels.len());
        let mut reps: Vec<Vec<usize>> = Vec::with_capacity(levels.len());
        let mut agree = true;
        for k in 0..levels.len() {
            let ambient = levels[k].len();
            let mut ideal: Vec<Vec<BigRational>> = Vec::new();
            if k >= 1 {
                for i in 0..n {
                    let m = basis.log_partial_matrix(fan, a, i, ci, k - 1)?;
                    for c in 0..m.cols() {
                        ideal.push(m.column(c));
                    }
                }
            }
            if let Some(pr) = prime {
                if let Some(mod_rank) = rank_mod_p(&ideal, ambient, pr as u64) {
                    let red = SpanReducer::from_vectors(ambient, ideal.clone());
                    if mod_rank != red.rank() {
                        agree = false;
                    }
                    dims.push(ambient - red.rank());
                    reps.push(red.non_pivots());
                    reducers.push(red);
                    continue;
                }
            }
            let red = SpanReducer::from_vectors(ambient, ideal);
            dims.push(ambient - red.rank());
            reps.push(red.non_pivots());
            reducers.push(red);
        }
        // [f] between consecutive level quotients
        let mut f_maps = Vec::new();
        for k in 0..levels.len().saturating_sub(1) {
            let ambient = basis.f_mult_matrix(fan, a, ci, k)?;
            let mut cols = Vec::new();
            for &rep_pos in &reps[k] {
                let mut unit = vec![BigRational::zero(); levels[k].len()];
                unit[rep_pos] = BigRational::one();
                let image = ambient.mat_vec(&unit);
                let reduced = reducers[k + 1].reduce(image);
                cols.push(reps[k + 1].iter().map(|&p| reduced[p].clone()).collect());
            }
            f_maps.push(RatMatrix::from_columns(cols, dims[k + 1]));
        }
        Ok((
            ClassBlock {
                box_index: ci,
                base_degree: cache.element(ci).degree.clone(),
                dims,
                reps,
                f_maps,
                reducers,
            },
            agree,
        ))
    });

    let mut blocks = Vec::with_capacity(built.len());
    let mut all_agree = true;
    for b in built {
        let (block, agree) = b?;
        all_agree &= agree;
        blocks.push(block);
    }
    let mut per_degree: BTreeMap<BigRational, u64> = BTreeMap::new();
    let mut total = BigInt::zero();
    for block in &blocks {
        for (k, &d) in block.dims.iter().enumerate() {
            if d > 0 {
                let beta =
                    &block.base_degree + BigRational::from_integer(BigInt::from(k as i64));
                *per_degree.entry(beta).or_insert(0) += d as u64;
                total += BigInt::from(d);
            }
        }
    }
    Ok(GradedQuotient {
        rank: fan.rank(),
        expected_milnor: p.normalized_volume(),
        blocks,
        total,
        per_degree,
        precheck: prime.map(|pr| (pr, all_agree)),
    })
}

/// Per-class report of oracle dimensions against the h-vector prediction.
#[derive(Debug, Clone)]
pub struct ClassReport {
    pub point: Vec<BigInt>,
    pub cone_rays: Vec<usize>,
    pub degree: BigRational,
    pub dims: Vec<usize>,
    pub expected_h: Vec<u64>,
    pub matches: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ChecksSummary {
    pub dimensions: bool,
    pub milnor_total: bool,
    pub lefschetz: bool,
    pub birkhoff: bool,
    pub spectrum_match: bool,
    pub similarity: bool,
    pub modular_precheck: Option<(u32, bool)>,
}

impl ChecksSummary {
    pub fn pass(&self) -> bool {
        self.dimensions
            && self.milnor_total
            && self.lefschetz
            && self.birkhoff
            && self.spectrum_match
            && self.similarity
    }
}

/// The complete oracle run for one polytope and coefficient assignment.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub polytope: String,
    pub rank: usize,
    pub seed: Option<u64>,
    pub coefficients: String,
    pub milnor: BigInt,
    pub expected_milnor: BigInt,
    pub per_degree: Vec<(BigRational, u64)>,
    pub per_class: Vec<ClassReport>,
    pub checks: ChecksSummary,
    pub mismatches: Vec<String>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.checks.pass()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let per_degree: Vec<serde_json::Value> = self
            .per_degree
            .iter()
            .map(|(b, d)| serde_json::json!([format_rational(b), d]))
            .collect();
        let per_class: Vec<serde_json::Value> = self
            .per_class
            .iter()
            .map(|c| {
                serde_json::json!({
                    "u": c.point.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "sigma": c.cone_rays,
                    "degree": format_rational(&c.degree),
                    "dims": c.dims,
                    "expected_h": c.expected_h,
                    "match": c.matches,
                })
            })
            .collect();
        let mut checks = serde_json::json!({
            "dimensions": self.checks.dimensions,
            "milnor_total": self.checks.milnor_total,
            "lefschetz": self.checks.lefschetz,
            "birkhoff": self.checks.birkhoff,
            "spectrum_match": self.checks.spectrum_match,
            "similarity": self.checks.similarity,
        });
        if let Some((p, ok)) = self.checks.modular_precheck {
            checks["modular_precheck"] = serde_json::json!({"prime": p, "agrees": ok});
        }
        serde_json::json!({
            "polytope": self.polytope,
            "rank": self.rank,
            "seed": self.seed,
            "coefficients": self.coefficients,
            "milnor": self.milnor.to_string(),
            "expected_milnor": self.expected_milnor.to_string(),
            "per_degree": per_degree,
            "per_class": per_class,
            "checks": checks,
            "mismatches": self.mismatches,
            "pass": self.pass(),
        })
    }
}

/// Compares the oracle's block dimensions with the h-vector predictions.
pub fn verify_against_combinatorics(
    fan: &StackyFan,
    cache: &BoxCache,
    quotient: &GradedQuotient,
) -> Result<(Vec<ClassReport>, bool)> {
    let mut reports = Vec::new();
    let mut all = true;
    for block in &quotient.blocks {
        let el = cache.element(block.box_index);
        let c = fan.cone_codim(el.cone);
        let (_, h) = fan.f_and_h_vector(el.cone)?;
        let mut matches = true;
        for k in 0..block.dims.len().max(c + 1) {
            let got = block.dims.get(k).copied().unwrap_or(0);
            let want = if k <= c { h[k] as usize } else { 0 };
            if got != want {
                matches = false;
            }
        }
        all &= matches;
        reports.push(ClassReport {
            point: el.point.clone(),
            cone_rays: fan.cone_rays(el.cone).to_vec(),
            degree: el.degree.clone(),
            dims: block.dims.clone(),
            expected_h: h,
            matches,
        });
    }
    Ok((reports, all))
}

/// Hard Lefschetz, nilpotency, monodromy filtration and the
/// opposite-filtration splitting on one block.
fn block_birkhoff_check(
    fan: &StackyFan,
    cache: &BoxCache,
    block: &ClassBlock,
) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    let el = cache.element(block.box_index);
    let c = fan.cone_codim(el.cone);
    let total = block.total_dim();
    let f_total = block.total_f_matrix();

    // [f]^{c+1} = 0 on the block
    let mut power = RatMatrix::identity(total);
    for _ in 0..=c {
        power = f_total.mul(&power);
    }
    if (0..total).any(|r| (0..total).any(|cidx| !power.at(r, cidx).is_zero())) {
        problems.push(format!("[f]^{} nonzero on class {:?}", c + 1, el.point));
    }

    // hard Lefschetz level ranks
    for k in 0..=c / 2 {
        if 2 * k > block.dims.len() {
            continue;
        }
        let mut m = RatMatrix::identity(block.dims.get(k).copied().unwrap_or(0));
        for step in 0..c - 2 * k {
            match block.f_maps.get(k + step) {
                Some(f) => m = f.mul(&m),
                None => {
                    m = RatMatrix::zeros(0, m.cols());
                    break;
                }
            }
        }
        let expected = block.dims.get(k).copied().unwrap_or(0);
        if m.rank() != expected {
            problems.push(format!(
                "lefschetz rank [f]^{} = {} != {} on class {:?} level {}",
                c - 2 * k,
                m.rank(),
                expected,
                el.point,
                k
            ));
        }
    }

    // monodromy filtration and its defining properties
    let filt = match monodromy_filtration(&f_total) {
        Ok(f) => f,
        Err(e) => {
            problems.push(format!("monodromy filtration on class {:?}: {e}", el.point));
            return Ok(problems);
        }
    };
    // graded pieces reproduce the level dimensions: Gr_{2k-c} = level c-k
    for k in 0..=c as i64 {
        let got = filt.graded_dim(2 * k - c as i64);
        let want = block.dims.get(c - k as usize).copied().unwrap_or(0);
        if got != want {
            problems.push(format!(
                "Gr^M_{} has dim {} != level dim {} on class {:?}",
                2 * k - c as i64,
                got,
                want,
                el.point
            ));
        }
    }

    // opposite filtrations: M_{2k-c} + F^{k + floor(deg u^-1) + 1} splits,
    // where the F-part is the span of levels j <= c-k-1
    let mut offsets = Vec::with_capacity(block.dims.len());
    let mut acc = 0;
    for d in &block.dims {
        offsets.push(acc);
        acc += d;
    }
    for k in 0..=c as i64 {
        let m_part = filt.subspace(2 * k - c as i64);
        let m_dim = m_part.len();
        let f_levels_end = (c as i64 - k - 1).max(-1);
        let mut vectors = m_part;
        let mut f_dim = 0usize;
        for j in 0..=f_levels_end {
            let j = j as usize;
            if j >= block.dims.len() {
                continue;
            }
            for i in 0..block.dims[j] {
                let mut v = vec![BigRational::zero(); total];
                v[offsets[j] + i] = BigRational::one();
                vectors.push(v);
            }
            f_dim += block.dims[j];
        }
        let rank = SpanReducer::from_vectors(total, vectors).rank();
        if m_dim + f_dim != total || rank != total {
            problems.push(format!(
                "opposite filtration fails on class {:?} at k = {k}: dim M = {m_dim}, dim F = {f_dim}, rank(M+F) = {rank}, total = {total}",
                el.point
            ));
        }
    }
    Ok(problems)
}

/// Conjugates `[f]` into gauge multiplication on `H` of the quotient fan via
/// the explicit monomial correspondence and asserts the intertwining.
fn block_similarity_check(
    fan: &StackyFan,
    cache: &BoxCache,
    basis: &GradedBasis,
    a: &CoefficientAssignment,
    block: &ClassBlock,
) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    let el = cache.element(block.box_index);
    let q = fan.quotient_fan(el.cone)?;
    let h = HRing::from_quotient(fan, &q)?;
    let l = gauge_class(fan, &q, &h)?;
    let c = fan.cone_codim(el.cone);

    // change of basis per level: SR monomial -> coefficient * t-point
    let mut change: Vec<RatMatrix> = Vec::new();
    for k in 0..=c {
        let monos = h.basis_monomials(k);
        let mut cols = Vec::new();
        for mono in monos {
            let mut point = el.point.clone();
            let mut coeff = BigRational::one();
            for (local, &e) in mono.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let ray = q.ray_ids[local];
                for _ in 0..e {
                    for (p, v) in point.iter_mut().zip(fan.ray(ray)) {
                        *p += v;
                    }
                    coeff *= &a.values[ray];
                }
            }
            let Some((ci, kk, pos)) = basis.position(&point) else {
                problems.push(format!(
                    "image point {point:?} missing from the graded basis (class {:?})",
                    el.point
                ));
                continue;
            };
            if ci != block.box_index || kk != k {
                problems.push(format!(
                    "image point {point:?} landed in the wrong block or level"
                ));
                continue;
            }
            let mut v = vec![BigRational::zero(); basis.levels[ci][k].len()];
            v[pos] = coeff;
            cols.push(block.reduce(k, v));
        }
        let m = RatMatrix::from_columns(cols, block.dims.get(k).copied().unwrap_or(0));
        if m.rank() != m.rows() || m.rows() != m.cols() {
            problems.push(format!(
                "basis correspondence is not invertible on class {:?} level {k}",
                el.point
            ));
        }
        change.push(m);
    }
    // intertwining [f] . C_k = C_{k+1} . (mult by gauge)
    for k in 0..c {
        let lhs = match block.f_maps.get(k) {
            Some(f) => f.mul(&change[k]),
            None => RatMatrix::zeros(0, change[k].cols()),
        };
        let rhs = change[k + 1].mul(&h.mult_matrix(&l, k));
        if lhs != rhs {
            problems.push(format!(
                "[f] does not intertwine the gauge action on class {:?} at level {k}",
                el.point
            ));
        }
    }
    Ok(problems)
}

/// Runs the whole oracle and crosses it against the combinatorial pipeline.
pub fn verify(
    p: &LatticePolytope,
    name: &str,
    a: &CoefficientAssignment,
    prime: Option<u32>,
) -> Result<VerificationReport> {
    let fan = StackyFan::from_polytope(p);
    let cache = box_of_fan(&fan)?;
    let basis = graded_basis(&fan, &cache)?;
    let quotient = graded_jacobian(p, &fan, &cache, &basis, a, prime)?;
    let diamonds = assemble(&fan, &cache)?;
    verify_prepared(&fan, &cache, &basis, &quotient, &diamonds, name, a)
}

/// Same as [`verify`] when the pipeline pieces are already built.
pub fn verify_prepared(
    fan: &StackyFan,
    cache: &BoxCache,
    basis: &GradedBasis,
    quotient: &GradedQuotient,
    diamonds: &DiamondSet,
    name: &str,
    a: &CoefficientAssignment,
) -> Result<VerificationReport> {
    let mut mismatches = Vec::new();
    let (per_class, dims_ok) = verify_against_combinatorics(fan, cache, quotient)?;
    if !dims_ok {
        for c in per_class.iter().filter(|c| !c.matches) {
            mismatches.push(format!(
                "class {:?}: dims {:?} != h-vector {:?}",
                c.point, c.dims, c.expected_h
            ));
        }
    }
    let milnor_total = quotient.total == quotient.expected_milnor;
    if !milnor_total {
        mismatches.push(format!(
            "total dimension {} != normalized volume {}",
            quotient.total, quotient.expected_milnor
        ));
    }
    let spectrum_match = quotient.spectrum(cache) == diamonds.spectrum;
    if !spectrum_match {
        mismatches.push("oracle spectrum differs from the combinatorial spectrum".into());
    }

    let block_results: Vec<Result<(Vec<String>, Vec<String>)>> =
        par::map_collect((0..quotient.blocks.len()).collect(), |bi| {
            let block = &quotient.blocks[bi];
            let birkhoff = block_birkhoff_check(fan, cache, block)?;
            let similarity = block_similarity_check(fan, cache, basis, a, block)?;
            Ok((birkhoff, similarity))
        });
    let mut lefschetz_birkhoff_ok = true;
    let mut similarity_ok = true;
    let mut lefschetz_ok = true;
    for r in block_results {
        let (birkhoff, similarity) = r?;
        for prob in &birkhoff {
            if prob.contains("lefschetz") {
                lefschetz_ok = false;
            } else {
                lefschetz_birkhoff_ok = false;
            }
        }
        if !similarity.is_empty() {
            similarity_ok = false;
        }
        mismatches.extend(birkhoff);
        mismatches.extend(similarity);
    }

    let checks = ChecksSummary {
        dimensions: dims_ok,
        milnor_total,
        lefschetz: lefschetz_ok,
        birkhoff: lefschetz_birkhoff_ok,
        spectrum_match,
        similarity: similarity_ok,
        modular_precheck: quotient.precheck,
    };
    let (seed, label) = match &a.provenance {
        CoeffProvenance::Seeded(s) => (Some(*s), a.provenance.label()),
        other => (None, other.label()),
    };
    Ok(VerificationReport {
        polytope: name.to_string(),
        rank: fan.rank(),
        seed,
        coefficients: label,
        milnor: quotient.total.clone(),
        expected_milnor: quotient.expected_milnor.clone(),
        per_degree: quotient
            .per_degree
            .iter()
            .map(|(b, d)| (b.clone(), *d))
            .collect(),
        per_class,
        checks,
        mismatches,
    })
}
