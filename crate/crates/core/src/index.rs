// Copyright 2026 The winfreq Authors
// SPDX-License-Identifier: Apache-2.0

//! Per-item occurrence sequences padded with sentinel occurrences.

use crate::error::{Error, Result};
use crate::stream::EventStream;

/// For each item, the sorted multiset of its occurrence times with `k` copies of
/// `0` prepended and `k` copies of `T + 1` appended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceIndex {
    k: usize,
    horizon: usize,
    lists: Vec<Vec<u32>>,
}

impl OccurrenceIndex {
    pub fn build(stream: &EventStream, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        let horizon = stream.horizon();
        let end = u32::try_from(horizon + 1)
            .map_err(|_| Error::InvalidConfig("horizon too large".into()))?;
        let lists = stream
            .item_occurrences()
            .into_iter()
            .map(|occ| {
                let mut list = Vec::with_capacity(occ.len() + 2 * k);
                list.extend(std::iter::repeat_n(0, k));
                list.extend(occ.into_iter().map(|t| t as u32));
                list.extend(std::iter::repeat_n(end, k));
                list
            })
            .collect();
        Ok(Self { k, horizon, lists })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn universe(&self) -> usize {
        self.lists.len()
    }

    /// Padded list of item `u` (1-indexed).
    pub fn list(&self, item: usize) -> &[u32] {
        &self.lists[item - 1]
    }

    pub fn lists(&self) -> impl Iterator<Item = &[u32]> {
        self.lists.iter().map(Vec::as_slice)
    }

    /// Length `m_u` of item `u`'s padded list.
    pub fn len_of(&self, item: usize) -> usize {
        self.lists[item - 1].len()
    }
}

/// Shorthand for [`OccurrenceIndex::build`].
pub fn build_index(stream: &EventStream, k: usize) -> Result<OccurrenceIndex> {
    OccurrenceIndex::build(stream, k)
}
