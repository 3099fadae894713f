//! Genetic modification of the elite set: random pairing, single-point
//! crossover and bounded Gaussian mutation.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::GmabError;
use crate::rng::OperatorStreams;
use crate::space::{SearchSpace, Solution};

/// Redraws allowed before an out-of-bounds mutation falls back to a uniform
/// draw over the dimension's range.
pub const DEFAULT_MAX_RESAMPLES: u32 = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct MutationConfig {
    /// Per-dimension standard deviation, `0.1 * (upper - lower)`.
    pub sigma: Vec<f64>,
    /// Per-component mutation probability. Zero disables mutation, which
    /// the solver never allows but tests use.
    pub p_mu: f64,
    pub max_resamples: u32,
}

impl MutationConfig {
    pub fn for_space(space: &SearchSpace, p_mu: f64) -> Self {
        MutationConfig {
            sigma: (0..space.dims())
                .map(|d| 0.1 * (space.upper()[d] - space.lower()[d]) as f64)
                .collect(),
            p_mu,
            max_resamples: DEFAULT_MAX_RESAMPLES,
        }
    }
}

/// Exchanges the tails after the first `cut` components.
///
/// `cut` must satisfy `1 <= cut <= D - 1`.
pub fn single_point_crossover(
    x1: &Solution,
    x2: &Solution,
    cut: usize,
) -> Result<(Solution, Solution), GmabError> {
    let dims = x1.dims();
    if x2.dims() != dims {
        return Err(GmabError::DimensionMismatch { expected: dims, got: x2.dims() });
    }
    if dims < 2 || cut == 0 || cut >= dims {
        return Err(GmabError::Genetic(format!(
            "crossover position {cut} outside 1..={} for dimension {dims}",
            dims.saturating_sub(1)
        )));
    }
    let (a, b) = (x1.coords(), x2.coords());
    let child1 = a[..cut].iter().chain(&b[cut..]).copied().collect();
    let child2 = b[..cut].iter().chain(&a[cut..]).copied().collect();
    Ok((Solution::new(child1), Solution::new(child2)))
}

/// Perturbs one component by rounded Gaussian noise, redrawing the noise
/// until the result lies in `[lower, upper]`.
///
/// Every redraw restarts from the original `value`. After `max_resamples`
/// rejected draws the component comes from `fallback` instead.
pub fn mutate_component(
    value: i64,
    lower: i64,
    upper: i64,
    mut draw_noise: impl FnMut() -> f64,
    max_resamples: u32,
    fallback: impl FnOnce() -> i64,
) -> i64 {
    if lower == upper {
        return value;
    }
    for _ in 0..=max_resamples {
        // f64::round rounds half away from zero.
        let candidate = (value as f64 + draw_noise()).round();
        if candidate >= lower as f64 && candidate <= upper as f64 {
            return candidate as i64;
        }
    }
    fallback()
}

/// Mutates each component independently with probability `p_mu`.
pub fn gaussian_mutate<R: Rng + ?Sized>(
    x: &Solution,
    space: &SearchSpace,
    cfg: &MutationConfig,
    rng: &mut R,
) -> Solution {
    let coords = x
        .coords()
        .iter()
        .enumerate()
        .map(|(d, &v)| {
            let u: f64 = rng.random();
            if u >= cfg.p_mu {
                return v;
            }
            let (lo, hi) = (space.lower()[d], space.upper()[d]);
            let Ok(normal) = Normal::new(0.0, cfg.sigma[d]) else {
                return v;
            };
            let mut fell_back = false;
            let out = mutate_component(
                v,
                lo,
                hi,
                || normal.sample(&mut *rng),
                cfg.max_resamples,
                || {
                    fell_back = true;
                    v
                },
            );
            if fell_back {
                rng.random_range(lo..=hi)
            } else {
                out
            }
        })
        .collect();
    Solution::new(coords)
}

/// Produces the offspring set `M_k` from the elite list `E_k`.
///
/// The elites are shuffled and paired off; each pair is crossed over with
/// probability `p_cr` at a uniform cut in `1..D`, then every component of
/// every offspring is mutated with probability `p_mu`. Duplicate offspring
/// are collapsed, keeping first occurrences, so at most `m` are returned.
pub fn genetic_modification(
    elites: &[Solution],
    space: &SearchSpace,
    p_cr: f64,
    cfg: &MutationConfig,
    streams: &mut OperatorStreams,
) -> Result<Vec<Solution>, GmabError> {
    let m = elites.len();
    if m < 2 || m % 2 != 0 {
        return Err(GmabError::Genetic(format!("elite set size {m} is not a positive even number")));
    }
    let mut seen = HashSet::with_capacity(m);
    for x in elites {
        if !space.validate(x)? {
            return Err(GmabError::OutOfBounds(x.coords().to_vec()));
        }
        if !seen.insert(x) {
            return Err(GmabError::Genetic(format!("elite {x} appears twice")));
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut streams.pairing);

    let dims = space.dims();
    let mut offspring = Vec::with_capacity(m);
    for pair in order.chunks_exact(2) {
        let (x1, x2) = (&elites[pair[0]], &elites[pair[1]]);
        let cross = streams.crossover.random::<f64>() < p_cr;
        if cross && dims >= 2 {
            let cut = streams.crossover.random_range(1..dims);
            let (c1, c2) = single_point_crossover(x1, x2, cut)?;
            offspring.push(c1);
            offspring.push(c2);
        } else {
            offspring.push(x1.clone());
            offspring.push(x2.clone());
        }
    }

    let mut unique = HashSet::with_capacity(m);
    Ok(offspring
        .iter()
        .map(|x| gaussian_mutate(x, space, cfg, &mut streams.mutation))
        .filter(|x| unique.insert(x.clone()))
        .collect())
}
