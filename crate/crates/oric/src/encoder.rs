//! Append-only label encoding of categorical strings.
//!
//! Code 0 is reserved for "others": categories seen fewer than `min_count`
//! times so far. Once a category reaches the threshold it gets the next free
//! code and keeps it forever, so codes assigned in earlier periods never
//! change.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{DataError, Result};

pub const OTHERS_CODE: u32 = 0;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FeatureEncoder {
    pub name: String,
    codes: BTreeMap<String, u32>,
    /// Occurrence counts of categories that have no code yet.
    pending: BTreeMap<String, u64>,
    next_code: u32,
}

impl FeatureEncoder {
    fn new(name: String) -> Self {
        FeatureEncoder {
            name,
            codes: BTreeMap::new(),
            pending: BTreeMap::new(),
            next_code: OTHERS_CODE + 1,
        }
    }

    fn observe(&mut self, value: &str, min_count: u64) {
        if self.codes.contains_key(value) {
            return;
        }
        let seen = self.pending.entry(value.to_owned()).or_insert(0);
        *seen += 1;
        if *seen >= min_count {
            self.pending.remove(value);
            self.codes.insert(value.to_owned(), self.next_code);
            self.next_code += 1;
        }
    }

    pub fn code(&self, value: &str) -> u32 {
        self.codes.get(value).copied().unwrap_or(OTHERS_CODE)
    }

    /// The category string behind `code`, if it is a real code.
    pub fn category(&self, code: u32) -> Option<&str> {
        self.codes
            .iter()
            .find(|(_, &c)| c == code)
            .map(|(s, _)| s.as_str())
    }

    pub fn num_codes(&self) -> usize {
        self.codes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderState {
    /// Categories seen fewer times than this map to [`OTHERS_CODE`].
    pub min_count: u64,
    features: Vec<FeatureEncoder>,
}

impl Default for EncoderState {
    fn default() -> Self {
        EncoderState::new(1)
    }
}

impl EncoderState {
    pub fn new(min_count: u64) -> Self {
        EncoderState {
            min_count: min_count.max(1),
            features: Vec::new(),
        }
    }

    pub fn is_bound(&self) -> bool {
        !self.features.is_empty()
    }

    pub fn schema(&self) -> Vec<String> {
        self.features.iter().map(|f| f.name.clone()).collect()
    }

    pub fn feature(&self, index: usize) -> Option<&FeatureEncoder> {
        self.features.get(index)
    }

    /// Binds an unbound encoder to `names`, or checks that a bound one matches.
    pub fn bind(&mut self, names: &[String]) -> Result<()> {
        if !self.is_bound() {
            self.features = names.iter().cloned().map(FeatureEncoder::new).collect();
            return Ok(());
        }
        let schema = self.schema();
        if schema != names {
            return Err(DataError::SchemaMismatch(format!(
                "categorical columns {names:?} differ from encoder columns {schema:?}"
            )));
        }
        Ok(())
    }

    pub(crate) fn observe(&mut self, feature: usize, value: &str) {
        let min_count = self.min_count;
        self.features[feature].observe(value, min_count);
    }

    pub fn encode(&self, feature: usize, value: &str) -> u32 {
        self.features[feature].code(value)
    }

    /// `name=category` for one item, falling back to the raw code.
    pub fn describe(&self, feature: u32, code: u32) -> String {
        match self.features.get(feature as usize) {
            Some(f) => match f.category(code) {
                Some(cat) => format!("{}={cat}", f.name),
                None if code == OTHERS_CODE => format!("{}=<others>", f.name),
                None => format!("{}=#{code}", f.name),
            },
            None => format!("f{feature}={code}"),
        }
    }
}
