//! Seeded channel models.

use polycode::Error;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub enum Channel {
    /// Each position independently with probability rho.
    Random(f64),
    /// Exactly this many distinct positions.
    Count(usize),
    /// A contiguous window of this length at a random offset.
    Burst(usize),
    Explicit(Vec<usize>),
}

/// Corrupts `word`; every reported position changes to a different symbol.
pub fn channel_corrupt<S, F>(word: &[S], model: &Channel, rng: &mut ChaCha8Rng, mut perturb: F) -> Result<(Vec<S>, Vec<usize>), Error>
where
    S: Clone + PartialEq,
    F: FnMut(&S, &mut ChaCha8Rng) -> S,
{
    let n = word.len();
    let mut positions: Vec<usize> = match model {
        Channel::Random(rho) => {
            if !(0.0..=1.0).contains(rho) {
                return Err(Error::BadPositions(format!("rate {rho} outside [0, 1]")));
            }
            (0..n).filter(|_| rng.gen::<f64>() < *rho).collect()
        }
        Channel::Count(c) => {
            if *c > n {
                return Err(Error::BadPositions(format!("{c} errors in a word of length {n}")));
            }
            sample(rng, n, *c).into_vec()
        }
        Channel::Burst(len) => {
            if *len > n {
                return Err(Error::BadPositions(format!("burst of {len} in a word of length {n}")));
            }
            let start = rng.gen_range(0..=n - len);
            (start..start + len).collect()
        }
        Channel::Explicit(ps) => {
            let mut ps = ps.clone();
            ps.sort_unstable();
            if ps.windows(2).any(|w| w[0] == w[1]) || ps.last().is_some_and(|&p| p >= n) {
                return Err(Error::BadPositions(format!("{ps:?} for length {n}")));
            }
            ps
        }
    };
    positions.sort_unstable();
    let mut out = word.to_vec();
    for &i in &positions {
        let new = perturb(&word[i], rng);
        debug_assert!(new != word[i]);
        out[i] = new;
    }
    Ok((out, positions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn flip(x: &u32, rng: &mut ChaCha8Rng) -> u32 {
        (x + rng.gen_range(1..7)) % 7
    }

    #[test]
    fn models() {
        let w: Vec<u32> = (0..7).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (same, pos) = channel_corrupt(&w, &Channel::Random(0.0), &mut rng, flip).unwrap();
        assert_eq!(same, w);
        assert!(pos.is_empty());
        let (c, pos) = channel_corrupt(&w, &Channel::Explicit(vec![3, 0]), &mut rng, flip).unwrap();
        assert_eq!(pos, vec![0, 3]);
        let diff: Vec<usize> = (0..7).filter(|&i| c[i] != w[i]).collect();
        assert_eq!(diff, pos);
        assert!(channel_corrupt(&w, &Channel::Explicit(vec![7]), &mut rng, flip).is_err());
        assert!(channel_corrupt(&w, &Channel::Explicit(vec![1, 1]), &mut rng, flip).is_err());
        let (_, pos) = channel_corrupt(&w, &Channel::Burst(3), &mut rng, flip).unwrap();
        assert_eq!(pos.len(), 3);
        assert_eq!(pos[2] - pos[0], 2);
    }

    #[test]
    fn random_rate_concentrates() {
        let w = vec![0u32; 10_000];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (_, pos) = channel_corrupt(&w, &Channel::Random(0.25), &mut rng, flip).unwrap();
        let frac = pos.len() as f64 / 1e4;
        assert!((0.23..=0.27).contains(&frac), "{frac}");
    }
}
