//! Items, patterns, compressed chains and labeled batches.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{OricError, Result};

/// One `feature = category` condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Item {
    pub feature: u32,
    pub category: u32,
}

impl Item {
    pub const fn new(feature: u32, category: u32) -> Self {
        Item { feature, category }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}={}", self.feature, self.category)
    }
}

/// A canonical, nonempty set of items with strictly increasing features.
///
/// Equality is item-sequence equality. The derived ordering is lexicographic
/// over the sorted items.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pattern {
    items: Vec<Item>,
}

impl Pattern {
    /// Canonicalizes raw `(feature, category)` pairs.
    pub fn from_items<I>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut items: Vec<Item> = raw.into_iter().map(|(f, c)| Item::new(f, c)).collect();
        Self::from_item_vec(&mut items)?;
        Ok(Pattern { items })
    }

    fn from_item_vec(items: &mut [Item]) -> Result<()> {
        if items.is_empty() {
            return Err(OricError::EmptyPattern);
        }
        items.sort_unstable();
        for pair in items.windows(2) {
            if pair[0].feature == pair[1].feature {
                return Err(OricError::DuplicateFeature {
                    feature: pair[0].feature,
                });
            }
        }
        Ok(())
    }

    /// Builds a pattern from items already sorted by strictly increasing feature.
    pub(crate) fn from_sorted_unchecked(items: Vec<Item>) -> Self {
        debug_assert!(!items.is_empty());
        debug_assert!(items.windows(2).all(|w| w[0].feature < w[1].feature));
        Pattern { items }
    }

    pub fn single(item: Item) -> Self {
        Pattern {
            items: alloc::vec![item],
        }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// Number of items (the interaction order).
    pub fn order(&self) -> usize {
        self.items.len()
    }

    pub fn singles(&self) -> impl Iterator<Item = Pattern> + '_ {
        self.items.iter().map(|&i| Pattern::single(i))
    }

    pub fn is_subset_of(&self, other: &Pattern) -> bool {
        let mut rest = other.items.iter();
        'outer: for item in &self.items {
            for candidate in rest.by_ref() {
                if candidate == item {
                    continue 'outer;
                }
                if candidate.feature > item.feature {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_proper_subset_of(&self, other: &Pattern) -> bool {
        self.order() < other.order() && self.is_subset_of(other)
    }

    /// All nonempty proper sub-patterns. Exponential in the order.
    pub fn proper_subpatterns(&self) -> Vec<Pattern> {
        let n = self.items.len();
        if n <= 1 {
            return Vec::new();
        }
        debug_assert!(n < 32);
        let full = (1u32 << n) - 1;
        (1..full)
            .map(|mask| {
                let items = (0..n)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| self.items[b])
                    .collect();
                Pattern { items }
            })
            .collect()
    }

    pub fn max_feature(&self) -> u32 {
        self.items[self.items.len() - 1].feature
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str("&")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}

/// Error parsing the canonical `f3=17&f7=2` pattern string.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsePatternError(pub String);

impl fmt::Display for ParsePatternError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse pattern: {}", self.0)
    }
}

impl core::error::Error for ParsePatternError {}

impl FromStr for Pattern {
    type Err = ParsePatternError;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        let bad = || ParsePatternError(String::from(s));
        let mut raw = Vec::new();
        for part in s.trim().split('&') {
            let (feature, category) = part.split_once('=').ok_or_else(bad)?;
            let feature = feature.strip_prefix('f').ok_or_else(bad)?;
            raw.push((
                feature.parse().map_err(|_| bad())?,
                category.parse().map_err(|_| bad())?,
            ));
        }
        Pattern::from_items(raw).map_err(|_| bad())
    }
}

/// A random intersection chain stored as the head sample plus per-item
/// survival counts. Node `r` holds the items whose count is at least `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    items: Vec<Item>,
    counts: Vec<u32>,
    length: u32,
}

impl Chain {
    pub fn new(items: Vec<Item>, counts: Vec<u32>, length: u32) -> Result<Self> {
        if items.len() != counts.len() {
            return Err(OricError::InvalidChain("items and counts differ in length"));
        }
        if length == 0 {
            return Err(OricError::InvalidChain("length must be at least 1"));
        }
        if counts.iter().any(|&c| c == 0 || c > length) {
            return Err(OricError::InvalidChain("counts must lie in 1..=length"));
        }
        if items.windows(2).any(|w| w[0].feature >= w[1].feature) {
            return Err(OricError::InvalidChain(
                "items must have strictly increasing features",
            ));
        }
        Ok(Chain {
            items,
            counts,
            length,
        })
    }

    pub(crate) fn from_parts_unchecked(items: Vec<Item>, counts: Vec<u32>, length: u32) -> Self {
        Chain {
            items,
            counts,
            length,
        }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Number of samples intersected.
    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn tail_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c == self.length).count()
    }

    pub fn tail_items(&self) -> impl Iterator<Item = Item> + '_ {
        self.items
            .iter()
            .zip(&self.counts)
            .filter(move |(_, &c)| c == self.length)
            .map(|(&i, _)| i)
    }

    /// The tail node as a pattern, or `None` when the intersection is empty.
    pub fn tail_pattern(&self) -> Option<Pattern> {
        let items: Vec<Item> = self.tail_items().collect();
        if items.is_empty() {
            None
        } else {
            Some(Pattern::from_sorted_unchecked(items))
        }
    }

    fn count_of(&self, item: Item) -> u32 {
        match self
            .items
            .binary_search_by_key(&item.feature, |i| i.feature)
        {
            Ok(j) if self.items[j].category == item.category => self.counts[j],
            _ => 0,
        }
    }
}

/// Items of node `rank` (1-based) of the chain.
pub fn node_at(chain: &Chain, rank: u32) -> Result<BTreeSet<Item>> {
    if rank == 0 || rank > chain.length {
        return Err(OricError::RankOutOfRange {
            rank,
            length: chain.length,
        });
    }
    Ok(chain
        .items
        .iter()
        .zip(&chain.counts)
        .filter(|(_, &c)| c >= rank)
        .map(|(&i, _)| i)
        .collect())
}

/// Number of chain nodes containing `pattern`, and whether it survives to the tail.
pub fn occurrence_count(chain: &Chain, pattern: &Pattern) -> (u32, bool) {
    let k = pattern
        .items()
        .iter()
        .map(|&item| chain.count_of(item))
        .min()
        .unwrap_or(0);
    (k, k == chain.length)
}

/// A named numerical column. Carried along with a batch but never mined.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NumericColumn {
    pub name: String,
    pub values: Vec<f64>,
}

/// One period of columnar categorical data with binary labels.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LabeledBatch {
    schema: Vec<String>,
    columns: Vec<Vec<u32>>,
    labels: Vec<u8>,
    period: u64,
    numeric: Vec<NumericColumn>,
}

impl LabeledBatch {
    pub fn new(
        schema: Vec<String>,
        columns: Vec<Vec<u32>>,
        labels: Vec<u8>,
        period: u64,
    ) -> Result<Self> {
        if schema.len() != columns.len() {
            return Err(OricError::InvalidBatch(alloc::format!(
                "{} feature names for {} columns",
                schema.len(),
                columns.len()
            )));
        }
        let rows = labels.len();
        if let Some((f, col)) = columns.iter().enumerate().find(|(_, c)| c.len() != rows) {
            return Err(OricError::InvalidBatch(alloc::format!(
                "column {f} has {} rows, labels have {rows}",
                col.len()
            )));
        }
        if let Some(row) = labels.iter().position(|&y| y > 1) {
            return Err(OricError::InvalidBatch(alloc::format!(
                "label at row {row} is not 0 or 1"
            )));
        }
        Ok(LabeledBatch {
            schema,
            columns,
            labels,
            period,
            numeric: Vec::new(),
        })
    }

    /// Attaches numerical columns. They must have the batch's row count.
    pub fn with_numeric(mut self, numeric: Vec<NumericColumn>) -> Result<Self> {
        if let Some(col) = numeric.iter().find(|c| c.values.len() != self.num_rows()) {
            return Err(OricError::InvalidBatch(alloc::format!(
                "numeric column {} has {} rows, expected {}",
                col.name,
                col.values.len(),
                self.num_rows()
            )));
        }
        self.numeric = numeric;
        Ok(self)
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn numeric(&self) -> &[NumericColumn] {
        &self.numeric
    }

    pub fn num_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn num_features(&self) -> usize {
        self.columns.len()
    }

    #[inline]
    pub fn value(&self, feature: usize, row: usize) -> u32 {
        self.columns[feature][row]
    }

    /// Row indices carrying `label`.
    pub fn class_rows(&self, label: u8) -> Vec<u32> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &y)| y == label)
            .map(|(r, _)| r as u32)
            .collect()
    }

    pub fn class_count(&self, label: u8) -> usize {
        self.labels.iter().filter(|&&y| y == label).count()
    }

    pub fn row_contains(&self, row: usize, pattern: &Pattern) -> bool {
        pattern
            .items()
            .iter()
            .all(|it| self.columns[it.feature as usize][row] == it.category)
    }

    /// Checks that every item of `pattern` names a feature of this batch.
    pub fn check_pattern(&self, pattern: &Pattern) -> Result<()> {
        if pattern.max_feature() as usize >= self.num_features() {
            return Err(OricError::SchemaMismatch(alloc::format!(
                "pattern {pattern} references feature {} but the batch has {} features",
                pattern.max_feature(),
                self.num_features()
            )));
        }
        Ok(())
    }
}
