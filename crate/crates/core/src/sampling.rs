//! Seeded random data for property checks and experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::toda::PhaseState;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` derived from a master seed.
pub fn substream(seed: u64, stream: u64) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn uniform_vec(rng: &mut impl Rng, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// Subtracts the mean so the entries sum to zero.
pub fn centered(mut v: Vec<f64>) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
    v
}

/// Chain state with `|q|, |p| ≤ bound` before centring, and `Σq = Σp = 0`.
pub fn centered_state(rng: &mut impl Rng, n: usize, bound: f64) -> PhaseState {
    PhaseState {
        q: centered(uniform_vec(rng, n, -bound, bound)),
        p: centered(uniform_vec(rng, n, -bound, bound)),
    }
}

/// `n − 1` couplings drawn from `[lo, hi]`.
pub fn couplings(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    uniform_vec(rng, n - 1, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_centred() {
        let a = centered_state(&mut rng(7), 5, 1.0);
        let b = centered_state(&mut rng(7), 5, 1.0);
        assert_eq!(a, b);
        assert!(a.q.iter().sum::<f64>().abs() < 1e-15);
        assert!(a.p.iter().sum::<f64>().abs() < 1e-15);
        let mut s1 = substream(7, 1);
        let mut s2 = substream(7, 2);
        assert_ne!(s1.gen::<u64>(), s2.gen::<u64>());
    }
}
