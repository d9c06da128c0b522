use std::cmp::Ordering;

use crate::attenuated::SpaceParams;
use crate::bits::Bits;

/// A subset of `M_n`, stored as bits over the canonical vertex order.
///
/// Sets order by their bit keys: little-endian 64-bit words compared
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    sp: SpaceParams,
    bits: Bits,
}

impl VertexSet {
    pub fn empty(sp: &SpaceParams) -> Self {
        Self { sp: sp.clone(), bits: Bits::new(sp.num_vertices()) }
    }

    pub fn full(sp: &SpaceParams) -> Self {
        Self { sp: sp.clone(), bits: Bits::full(sp.num_vertices()) }
    }

    pub fn from_indices(sp: &SpaceParams, idx: impl IntoIterator<Item = usize>) -> Self {
        Self { sp: sp.clone(), bits: Bits::from_indices(sp.num_vertices(), idx) }
    }

    pub(crate) fn from_bits(sp: &SpaceParams, bits: Bits) -> Self {
        assert_eq!(bits.len(), sp.num_vertices());
        Self { sp: sp.clone(), bits }
    }

    pub fn params(&self) -> &SpaceParams {
        &self.sp
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.bits.get(idx)
    }

    pub fn insert(&mut self, idx: usize) {
        self.bits.set(idx);
    }

    pub fn remove(&mut self, idx: usize) {
        self.bits.unset(idx);
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn complement(&self) -> Self {
        Self { sp: self.sp.clone(), bits: self.bits.not() }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self { sp: self.sp.clone(), bits: self.bits.or(&other.bits) }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self { sp: self.sp.clone(), bits: self.bits.and(&other.bits) }
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self { sp: self.sp.clone(), bits: self.bits.and_not(&other.bits) }
    }

    pub fn intersection_size(&self, other: &Self) -> usize {
        self.bits.and_count(&other.bits)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits.is_disjoint(&other.bits)
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits.words().cmp(other.bits.words())
    }
}
