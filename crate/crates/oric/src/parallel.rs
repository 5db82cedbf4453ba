use oric_core::chain::{ChainCounts, ChainEngine};
use oric_core::rng::substream;
use oric_core::{generate_chain, ChainConfig, ChainSet, ClassView, Pattern, Result};
use rayon::prelude::*;

/// Rayon-backed chain engine. Chain `m` uses substream `m` and counts are
/// exact integers, so results match [`oric_core::SequentialEngine`] for any
/// thread count.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParallelEngine;

impl ChainEngine for ParallelEngine {
    fn generate(&self, view: &ClassView<'_>, cfg: &ChainConfig, seed: u64) -> Result<ChainSet> {
        cfg.validate()?;
        let chains = (0..cfg.num_chains)
            .into_par_iter()
            .map(|m| generate_chain(view, cfg, &mut substream(seed, m as u64)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainSet::from_chains(chains))
    }

    fn count(&self, chains: &ChainSet, patterns: &[Pattern]) -> Vec<ChainCounts> {
        patterns.par_iter().map(|p| chains.count(p)).collect()
    }
}
