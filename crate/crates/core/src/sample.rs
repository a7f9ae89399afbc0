//! Deterministic tuple enumeration for the identity suites.
//!
//! A suite checks a multilinear identity over tuples of basis elements.
//! When the tuple count fits the budget the iteration is exhaustive;
//! otherwise tuples are drawn from a seeded RNG together with small
//! nonzero rational coefficients (multilinearity makes basis tuples
//! sufficient, the coefficients just stir the pot).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::CheckMode;
use crate::scalar::{int, Scalar};

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_SAMPLES: u64 = 20_000;
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub budget: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            budget: DEFAULT_BUDGET,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

impl SuiteConfig {
    pub fn exhaustive() -> Self {
        SuiteConfig {
            budget: u64::MAX,
            ..SuiteConfig::default()
        }
    }
}

pub struct TupleStream {
    sizes: Vec<usize>,
    mode: CheckMode,
    /// odometer state for exhaustive mode
    current: Option<Vec<usize>>,
    rng: Option<ChaCha8Rng>,
    emitted: u64,
    samples: u64,
}

impl TupleStream {
    /// Plans iteration over `sizes[0] × ... × sizes[k-1]` index tuples.
    pub fn new(sizes: Vec<usize>, cfg: &SuiteConfig) -> Self {
        let total: u128 = sizes.iter().map(|&s| s as u128).product();
        if total == 0 {
            return TupleStream {
                sizes,
                mode: CheckMode::Exhaustive,
                current: None,
                rng: None,
                emitted: 0,
                samples: 0,
            };
        }
        if total <= cfg.budget as u128 {
            let start = vec![0; sizes.len()];
            TupleStream {
                sizes,
                mode: CheckMode::Exhaustive,
                current: Some(start),
                rng: None,
                emitted: 0,
                samples: 0,
            }
        } else {
            TupleStream {
                sizes,
                mode: CheckMode::Sampled {
                    seed: cfg.seed,
                    samples: cfg.samples,
                },
                current: None,
                rng: Some(ChaCha8Rng::seed_from_u64(cfg.seed)),
                emitted: 0,
                samples: cfg.samples,
            }
        }
    }

    pub fn mode(&self) -> CheckMode {
        self.mode.clone()
    }

    /// Nonzero coefficients attached to sampled tuples.
    fn coefficient(rng: &mut ChaCha8Rng) -> Scalar {
        const CHOICES: [i64; 4] = [-2, -1, 1, 2];
        int(CHOICES[rng.gen_range(0..CHOICES.len())])
    }
}

impl TupleStream {
    /// Drives `visit` over every planned tuple without per-tuple
    /// allocation; `coeffs` is `None` in exhaustive mode (all ones).
    pub fn run(mut self, mut visit: impl FnMut(&[usize], Option<&[Scalar]>)) {
        match self.rng.take() {
            None => {
                let Some(mut current) = self.current.take() else {
                    return;
                };
                'tuple: loop {
                    visit(&current, None);
                    let mut pos = self.sizes.len();
                    while pos > 0 {
                        pos -= 1;
                        current[pos] += 1;
                        if current[pos] < self.sizes[pos] {
                            continue 'tuple;
                        }
                        current[pos] = 0;
                    }
                    break;
                }
            }
            Some(mut rng) => {
                let mut indices = vec![0usize; self.sizes.len()];
                let mut coeffs = vec![int(1); self.sizes.len()];
                while self.emitted < self.samples {
                    self.emitted += 1;
                    for (slot, &s) in self.sizes.iter().enumerate() {
                        indices[slot] = rng.gen_range(0..s);
                        coeffs[slot] = Self::coefficient(&mut rng);
                    }
                    visit(&indices, Some(&coeffs));
                }
            }
        }
    }
}
