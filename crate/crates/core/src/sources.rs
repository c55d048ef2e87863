//! Seeded synthetic memoryless sources.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Source {
    /// `p(k) ∝ k^-alpha` over ranks `k = 1..=N`.
    Zipf { alpha: f64 },
    /// `p(k) ∝ q^(k-1)` over ranks `k = 1..=N`.
    Geometric { q: f64 },
    /// Every letter equally likely.
    Uniform,
}

impl Source {
    /// Probabilities by rank, most likely first, normalized over `n` letters.
    pub fn rank_probabilities(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::Domain("alphabet size must be positive".into()));
        }
        let weights: Vec<f64> = match *self {
            Source::Zipf { alpha } => {
                if !(alpha.is_finite() && alpha >= 0.0) {
                    return Err(Error::Domain(format!("zipf exponent {alpha}")));
                }
                (1..=n).map(|k| (k as f64).powf(-alpha)).collect()
            }
            Source::Geometric { q } => {
                if !(q > 0.0 && q <= 1.0) {
                    return Err(Error::Domain(format!("geometric ratio {q} outside (0, 1]")));
                }
                (0..n).map(|k| q.powi(k as i32)).collect()
            }
            Source::Uniform => vec![1.0; n],
        };
        let sum: f64 = weights.iter().sum();
        Ok(weights.into_iter().map(|w| w / sum).collect())
    }

    /// Entropy in bits of the rank distribution.
    pub fn entropy(&self, n: usize) -> Result<f64> {
        Ok(self
            .rank_probabilities(n)?
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum())
    }

    /// Draws `len` i.i.d. letters. Ranks are mapped to letter ids through a
    /// seeded shuffle, so the most likely letter is not simply letter 0.
    pub fn generate(&self, n: usize, len: usize, seed: u64) -> Result<Vec<u32>> {
        let probs = self.rank_probabilities(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut letters: Vec<u32> = (0..n as u32).collect();
        letters.shuffle(&mut rng);
        let dist = WeightedIndex::new(&probs)
            .map_err(|e| Error::Domain(format!("source weights: {e}")))?;
        Ok((0..len).map(|_| letters[dist.sample(&mut rng)]).collect())
    }
}

impl std::str::FromStr for Source {
    type Err = Error;

    /// `zipf:<alpha>`, `geom:<q>` or `uniform`.
    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|e| Error::Format(format!("bad source parameter {t:?}: {e}")))
        };
        match s.split_once(':') {
            Some(("zipf", a)) => Ok(Source::Zipf { alpha: num(a)? }),
            Some(("geom", q)) => Ok(Source::Geometric { q: num(q)? }),
            None if s == "uniform" => Ok(Source::Uniform),
            _ => Err(Error::Format(format!("unknown source {s:?}"))),
        }
    }
}
