//! Bundled example polytopes and the rejection sampler behind `fuzz`.

use num::bigint::BigInt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::polytope::LatticePolytope;
use crate::{Error, Result};

fn build(vs: &[&[i64]]) -> LatticePolytope {
    LatticePolytope::validate(
        vs.iter()
            .map(|v| v.iter().map(|&c| BigInt::from(c)).collect())
            .collect(),
        None,
    )
    .expect("builtin polytope is valid")
}

pub fn segment() -> LatticePolytope {
    build(&[&[1], &[-1]])
}

pub fn triangle() -> LatticePolytope {
    build(&[&[1, 0], &[0, 1], &[-1, -1]])
}

pub fn stretched_triangle() -> LatticePolytope {
    build(&[&[1, 0], &[0, 2], &[-1, -1]])
}

pub fn square() -> LatticePolytope {
    build(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]])
}

pub fn octahedron() -> LatticePolytope {
    build(&[
        &[1, 0, 0],
        &[-1, 0, 0],
        &[0, 1, 0],
        &[0, -1, 0],
        &[0, 0, 1],
        &[0, 0, -1],
    ])
}

/// The five bundled polytopes with their names.
pub fn builtins() -> Vec<(&'static str, LatticePolytope)> {
    vec![
        ("segment", segment()),
        ("triangle", triangle()),
        ("stretched-triangle", stretched_triangle()),
        ("square", square()),
        ("octahedron", octahedron()),
    ]
}

#[derive(Debug, Clone)]
pub struct FuzzSpec {
    pub rank: usize,
    pub coord_bound: i64,
    pub volume_bound: u64,
    pub count: usize,
    pub seed: u64,
}

/// Rejection-samples `count` valid simplicial lattice polytopes with the
/// origin interior, coordinates bounded by `coord_bound` and normalized
/// volume at most `volume_bound`. Deterministic in the seed.
pub fn random_polytopes(spec: &FuzzSpec) -> Result<Vec<LatticePolytope>> {
    if spec.rank == 0 || spec.rank > 4 {
        return Err(Error::BadInput(format!(
            "fuzz rank {} out of the supported range 1..=4",
            spec.rank
        )));
    }
    if spec.coord_bound < 1 {
        return Err(Error::BadInput("coordinate bound must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    let max_attempts = 20_000usize.max(spec.count * 2_000);
    let mut attempts = 0usize;
    while out.len() < spec.count && attempts < max_attempts {
        attempts += 1;
        let candidate = if spec.rank == 1 {
            let a = rng.random_range(1..=spec.coord_bound);
            let b = rng.random_range(1..=spec.coord_bound);
            vec![vec![BigInt::from(a)], vec![BigInt::from(-b)]]
        } else {
            let m = rng.random_range(spec.rank + 1..=spec.rank + 5);
            let mut pts = Vec::with_capacity(m);
            for _ in 0..m {
                loop {
                    let p: Vec<i64> = (0..spec.rank)
                        .map(|_| rng.random_range(-spec.coord_bound..=spec.coord_bound))
                        .collect();
                    if p.iter().any(|&c| c != 0) {
                        pts.push(p.iter().map(|&c| BigInt::from(c)).collect());
                        break;
                    }
                }
            }
            pts
        };
        let Ok(p) = LatticePolytope::validate(candidate, None) else {
            continue;
        };
        let vol = p.normalized_volume();
        if vol > BigInt::from(spec.volume_bound) {
            continue;
        }
        out.push(p);
    }
    if out.len() < spec.count {
        return Err(Error::Internal(format!(
            "sampler found only {} of {} polytopes in {} attempts",
            out.len(),
            spec.count,
            attempts
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid() {
        for (name, p) in builtins() {
            assert!(p.rank() >= 1, "{name}");
        }
        assert_eq!(octahedron().normalized_volume(), BigInt::from(8));
        assert_eq!(stretched_triangle().normalized_volume(), BigInt::from(5));
    }

    #[test]
    fn sampler_is_deterministic() {
        let spec = FuzzSpec {
            rank: 2,
            coord_bound: 3,
            volume_bound: 60,
            count: 5,
            seed: 7,
        };
        let a = random_polytopes(&spec).unwrap();
        let b = random_polytopes(&spec).unwrap();
        assert_eq!(a.len(), 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.vertices(), y.vertices());
        }
    }

    #[test]
    fn sampler_respects_bounds() {
        for rank in 1..=3 {
            let spec = FuzzSpec {
                rank,
                coord_bound: 3,
                volume_bound: 60,
                count: 8,
                seed: 21,
            };
            for p in random_polytopes(&spec).unwrap() {
                assert_eq!(p.rank(), rank);
                assert!(p.normalized_volume() <= BigInt::from(60));
                for v in p.vertices() {
                    for c in v {
                        assert!(num::Signed::abs(c) <= BigInt::from(3));
                    }
                }
            }
        }
    }
}
