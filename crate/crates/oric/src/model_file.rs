//! Versioned, checksummed text model files.
//!
//! ```text
//! oric-model v1
//! sha256 <hex digest of the body>
//! <JSON body>
//! ```
//!
//! Decayed counts are written as shortest round-trip decimals and parsed
//! back exactly, so a save/load cycle is bit-exact.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use oric_core::{ChainConfig, ClassPriors, Item, ModelConfig, OricModel, Pattern, PatternStats};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{DataError, Result};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "oric-model";

#[derive(Debug, Serialize, Deserialize)]
struct ConfigRecord {
    num_chains: u32,
    max_length: u32,
    max_tail_size: u32,
    rng_seed: u64,
    d_freq: u32,
    d_conf: u32,
    gamma: f64,
}

/// `(items, k̂⁺, î⁺, k̂⁻, î⁻, first_seen, last_updated)`
type RegistryRecord = (Vec<(u32, u32)>, f64, f64, f64, f64, u64, u64);

#[derive(Debug, Serialize, Deserialize)]
struct ModelBody {
    schema: Vec<String>,
    config: ConfigRecord,
    period: u64,
    priors: (f64, f64),
    registry: Vec<RegistryRecord>,
}

/// In-memory bytes of one registry entry: its items plus the decayed stats.
pub fn record_size(pattern: &Pattern) -> usize {
    pattern.order() * std::mem::size_of::<Item>() + std::mem::size_of::<PatternStats>()
}

fn digest(body: &[u8]) -> String {
    hex::encode(Sha256::digest(body))
}

pub fn save_model(model: &OricModel) -> Vec<u8> {
    let cfg = model.config();
    let body = ModelBody {
        schema: model.schema().to_vec(),
        config: ConfigRecord {
            num_chains: cfg.chain.num_chains,
            max_length: cfg.chain.max_length,
            max_tail_size: cfg.chain.max_tail_size,
            rng_seed: cfg.chain.rng_seed,
            d_freq: cfg.d_freq,
            d_conf: cfg.d_conf,
            gamma: cfg.gamma,
        },
        period: model.period(),
        priors: (model.priors().n_pos, model.priors().n_neg),
        registry: model
            .registry()
            .iter()
            .map(|(p, s)| {
                (
                    p.items().iter().map(|i| (i.feature, i.category)).collect(),
                    s.k_hat_pos,
                    s.i_hat_pos,
                    s.k_hat_neg,
                    s.i_hat_neg,
                    s.first_seen,
                    s.last_updated,
                )
            })
            .collect(),
    };
    let json = serde_json::to_string(&body).expect("model body serializes");
    let mut out = format!(
        "{MAGIC} v{FORMAT_VERSION}\nsha256 {}\n",
        digest(json.as_bytes())
    );
    out.push_str(&json);
    out.push('\n');
    out.into_bytes()
}

pub fn load_model(bytes: &[u8]) -> Result<OricModel> {
    let corrupt = |why: &str| DataError::CorruptFile(why.to_owned());
    let text = std::str::from_utf8(bytes).map_err(|_| corrupt("not UTF-8"))?;
    let mut parts = text.splitn(3, '\n');
    let header = parts.next().unwrap_or_default();
    let version = header
        .strip_prefix(MAGIC)
        .and_then(|v| v.strip_prefix(" v"))
        .ok_or_else(|| corrupt("missing header"))?;
    if version != FORMAT_VERSION.to_string() {
        return Err(DataError::VersionMismatch {
            found: version.to_owned(),
            expected: FORMAT_VERSION,
        });
    }
    let checksum = parts
        .next()
        .and_then(|l| l.strip_prefix("sha256 "))
        .ok_or_else(|| corrupt("missing checksum"))?;
    let body = parts
        .next()
        .ok_or_else(|| corrupt("missing body"))?
        .trim_end_matches('\n');
    if digest(body.as_bytes()) != checksum {
        return Err(corrupt("checksum mismatch"));
    }
    let body: ModelBody =
        serde_json::from_str(body).map_err(|e| DataError::CorruptFile(e.to_string()))?;

    let config = ModelConfig {
        chain: ChainConfig {
            num_chains: body.config.num_chains,
            max_length: body.config.max_length,
            max_tail_size: body.config.max_tail_size,
            rng_seed: body.config.rng_seed,
        },
        d_freq: body.config.d_freq,
        d_conf: body.config.d_conf,
        gamma: body.config.gamma,
    };
    let mut registry = BTreeMap::new();
    for (items, k_hat_pos, i_hat_pos, k_hat_neg, i_hat_neg, first_seen, last_updated) in
        body.registry
    {
        let pattern = Pattern::from_items(items)?;
        let stats = PatternStats {
            k_hat_pos,
            i_hat_pos,
            k_hat_neg,
            i_hat_neg,
            first_seen,
            last_updated,
        };
        if registry.insert(pattern, stats).is_some() {
            return Err(corrupt("duplicate registry entry"));
        }
    }
    let priors = ClassPriors::new(body.priors.0, body.priors.1);
    Ok(OricModel::from_parts(
        config,
        body.schema,
        registry,
        priors,
        body.period,
    )?)
}

pub fn save_model_to(model: &OricModel, path: &Path) -> Result<()> {
    fs::write(path, save_model(model)).map_err(|e| DataError::io(path, e))
}

pub fn load_model_from(path: &Path) -> Result<OricModel> {
    let bytes = fs::read(path).map_err(|e| DataError::io(path, e))?;
    load_model(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> OricModel {
        let a = Pattern::from_items([(0, 1)]).unwrap();
        let ab = Pattern::from_items([(0, 1), (1, 3)]).unwrap();
        let stats = PatternStats {
            k_hat_pos: 0.1 + 0.2,
            i_hat_pos: 1.0 / 3.0,
            k_hat_neg: 1e-300,
            i_hat_neg: 12345.678901234567,
            first_seen: 1,
            last_updated: 3,
        };
        OricModel::from_parts(
            ModelConfig::default(),
            vec!["x".into(), "y \"quoted\"".into()],
            [(a, stats), (ab, PatternStats::new(2))]
                .into_iter()
                .collect(),
            ClassPriors::new(std::f64::consts::PI, 2.5),
            3,
        )
        .unwrap()
    }

    #[test]
    fn fresh_model_round_trip() {
        let fresh = OricModel::new(ModelConfig::default(), vec!["a".into()]).unwrap();
        assert_eq!(load_model(&save_model(&fresh)).unwrap(), fresh);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let m = model();
        let back = load_model(&save_model(&m)).unwrap();
        assert_eq!(back, m);
        for (p, s) in m.registry() {
            let b = back.stats(p).unwrap();
            assert_eq!(b.i_hat_pos.to_bits(), s.i_hat_pos.to_bits());
            assert_eq!(b.k_hat_neg.to_bits(), s.k_hat_neg.to_bits());
        }
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let bytes = save_model(&model());
        for cut in [5, 20, bytes.len() / 2, bytes.len() - 3] {
            assert!(
                matches!(load_model(&bytes[..cut]), Err(DataError::CorruptFile(_))),
                "cut at {cut}"
            );
        }
    }

    #[test]
    fn tampered_body_is_corrupt() {
        let text = String::from_utf8(save_model(&model())).unwrap();
        let tampered = text.replacen("\"period\":3", "\"period\":4", 1);
        assert_ne!(tampered, text);
        assert!(matches!(
            load_model(tampered.as_bytes()),
            Err(DataError::CorruptFile(_))
        ));
    }

    #[test]
    fn other_version_rejected() {
        let text = String::from_utf8(save_model(&model())).unwrap();
        let v2 = text.replacen("oric-model v1", "oric-model v2", 1);
        assert!(matches!(
            load_model(v2.as_bytes()),
            Err(DataError::VersionMismatch { .. })
        ));
    }
}
