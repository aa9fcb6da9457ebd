use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MarkovChain;

/// Draws initial states and successors of a chain.
#[derive(Clone, Debug)]
pub struct Sampler {
    init: (Vec<usize>, WeightedIndex<f64>),
    rows: Vec<(Vec<usize>, WeightedIndex<f64>)>,
}

impl Sampler {
    /// Fails if the initial distribution or some row has no positive mass.
    pub fn new(c: &MarkovChain) -> Result<Sampler, String> {
        let init = c.initial().iter().map(|(s, p)| (*s, super::chain::to_f64(p)));
        let init = table(init).map_err(|_| "initial distribution has no positive mass".to_string())?;
        let rows = (0..c.num_states())
            .map(|s| {
                table(c.row(s).iter().map(|t| (t.to, t.p)))
                    .map_err(|_| format!("state {} has no outgoing transition", c.name(s)))
            })
            .collect::<Result<_, _>>()?;
        Ok(Sampler { init, rows })
    }

    pub fn initial<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.init.0[self.init.1.sample(rng)]
    }

    pub fn step<R: Rng + ?Sized>(&self, s: usize, rng: &mut R) -> usize {
        let (to, w) = &self.rows[s];
        to[w.sample(rng)]
    }

    /// A run of `len` states.
    pub fn run<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<usize> {
        let mut out = Vec::with_capacity(len);
        if len == 0 {
            return out;
        }
        let mut s = self.initial(rng);
        out.push(s);
        while out.len() < len {
            s = self.step(s, rng);
            out.push(s);
        }
        out
    }
}

fn table(
    entries: impl Iterator<Item = (usize, f64)>,
) -> Result<(Vec<usize>, WeightedIndex<f64>), rand::distributions::WeightedError> {
    let (to, w): (Vec<usize>, Vec<f64>) = entries.filter(|e| e.1 > 0.0).unzip();
    Ok((to, WeightedIndex::new(w)?))
}

/// A run of `max_steps` states drawn with a ChaCha8 generator seeded by
/// `seed`.
pub fn sample_run(c: &MarkovChain, seed: u64, max_steps: usize) -> Result<Vec<usize>, String> {
    let s = Sampler::new(c)?;
    Ok(s.run(max_steps, &mut ChaCha8Rng::seed_from_u64(seed)))
}
