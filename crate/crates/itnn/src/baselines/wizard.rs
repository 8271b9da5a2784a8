//! Weightless RAM-node discriminators.
//!
//! A discriminator is a bank of `k` RAM nodes of `N` address bits each. A
//! bijective mapping assigns every one of the `k·N` input-bit positions to
//! one (node, address-bit) slot. Training writes a 1 into each node's
//! addressed location; the response to a pattern is the number of nodes
//! whose addressed location holds a 1, so a trained pattern always scores
//! exactly `k` and an untrained discriminator scores 0 everywhere.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encoding::BinaryVector;
use crate::error::{Error, Result};

/// One class's discriminator: `k` RAM nodes with `2^N` one-bit cells each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WizardDiscriminator {
    num_nodes: usize,
    address_bits: usize,
    // memory[node] holds 2^N cells; all zero at construction
    memory: Vec<BinaryVector>,
    // mapping[node * N + slot] = input-bit position feeding that slot
    mapping: Vec<usize>,
}

impl WizardDiscriminator {
    /// A fresh discriminator with the sequential mapping: node `i` reads
    /// input positions `i·N .. (i+1)·N`.
    pub fn new(num_nodes: usize, address_bits: usize) -> Result<Self> {
        let mapping = (0..num_nodes * address_bits).collect();
        Self::from_parts_zeroed(num_nodes, address_bits, mapping)
    }

    /// A fresh discriminator whose input-to-slot mapping is a seeded random
    /// bijection (the classical weightless-network retina wiring).
    pub fn with_random_mapping(num_nodes: usize, address_bits: usize, seed: u64) -> Result<Self> {
        let mut mapping: Vec<usize> = (0..num_nodes * address_bits).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Fisher-Yates
        for i in (1..mapping.len()).rev() {
            let j = rng.random_range(0..=i);
            mapping.swap(i, j);
        }
        Self::from_parts_zeroed(num_nodes, address_bits, mapping)
    }

    fn from_parts_zeroed(num_nodes: usize, address_bits: usize, mapping: Vec<usize>) -> Result<Self> {
        if num_nodes == 0 || address_bits == 0 {
            return Err(Error::invalid("need at least one node and one address bit"));
        }
        if address_bits >= usize::BITS as usize {
            return Err(Error::invalid("address width too large"));
        }
        let memory = (0..num_nodes)
            .map(|_| BinaryVector::zeros(1usize << address_bits))
            .collect();
        let d = WizardDiscriminator {
            num_nodes,
            address_bits,
            memory,
            mapping,
        };
        d.check_mapping()?;
        Ok(d)
    }

    /// Rebuilds a discriminator from persisted parts.
    pub fn from_parts(
        num_nodes: usize,
        address_bits: usize,
        mapping: Vec<usize>,
        memory: Vec<BinaryVector>,
    ) -> Result<Self> {
        let mut d = Self::from_parts_zeroed(num_nodes, address_bits, mapping)?;
        if memory.len() != num_nodes
            || memory.iter().any(|m| m.len() != 1usize << address_bits)
        {
            return Err(Error::invalid("memory geometry mismatch"));
        }
        d.memory = memory;
        Ok(d)
    }

    fn check_mapping(&self) -> Result<()> {
        let total = self.num_nodes * self.address_bits;
        if self.mapping.len() != total {
            return Err(Error::invalid("mapping length mismatch"));
        }
        let mut seen = alloc::vec![false; total];
        for &p in &self.mapping {
            if p >= total || seen[p] {
                return Err(Error::invalid("mapping is not a bijection"));
            }
            seen[p] = true;
        }
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn address_bits(&self) -> usize {
        self.address_bits
    }

    /// Expected input pattern length, `k·N`.
    pub fn pattern_len(&self) -> usize {
        self.num_nodes * self.address_bits
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// Per-node memory bitsets.
    pub fn memory(&self) -> &[BinaryVector] {
        &self.memory
    }

    fn address(&self, node: usize, pattern: &BinaryVector) -> usize {
        let mut addr = 0usize;
        for slot in 0..self.address_bits {
            let pos = self.mapping[node * self.address_bits + slot];
            addr = addr << 1 | pattern.get(pos) as usize;
        }
        addr
    }

    fn check_pattern(&self, pattern: &BinaryVector) -> Result<()> {
        if pattern.len() != self.pattern_len() {
            return Err(Error::LengthMismatch {
                expected: self.pattern_len(),
                actual: pattern.len(),
            });
        }
        Ok(())
    }

    /// Writes a 1 into every node's addressed location. Idempotent per
    /// pattern; requires exclusive access (the only mutating operation).
    pub fn train(&mut self, pattern: &BinaryVector) -> Result<()> {
        self.check_pattern(pattern)?;
        for node in 0..self.num_nodes {
            let addr = self.address(node, pattern);
            self.memory[node].set(addr, true);
        }
        Ok(())
    }

    /// Sum of the addressed bits: an integer in `0..=k`, proportional to
    /// the pattern's similarity to trained patterns.
    pub fn respond(&self, pattern: &BinaryVector) -> Result<usize> {
        self.check_pattern(pattern)?;
        Ok((0..self.num_nodes)
            .filter(|&node| self.memory[node].get(self.address(node, pattern)))
            .count())
    }
}

/// Picks the class whose discriminator responds strongest; ties go to the
/// lowest class index.
pub fn wizard_classify(
    discriminators: &[WizardDiscriminator],
    pattern: &BinaryVector,
) -> Result<usize> {
    let first = discriminators
        .first()
        .ok_or_else(|| Error::invalid("need at least one discriminator"))?;
    if discriminators
        .iter()
        .any(|d| d.num_nodes != first.num_nodes || d.address_bits != first.address_bits)
    {
        return Err(Error::invalid("discriminators disagree on geometry"));
    }
    let mut best = (0usize, 0usize);
    for (class, d) in discriminators.iter().enumerate() {
        let response = d.respond(pattern)?;
        if response > best.1 {
            best = (class, response);
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_pattern(rng: &mut ChaCha8Rng, len: usize) -> BinaryVector {
        BinaryVector::from_fn(len, |_| rng.random::<bool>())
    }

    #[test]
    fn fresh_discriminator_responds_zero() {
        let d = WizardDiscriminator::new(4, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = random_pattern(&mut rng, d.pattern_len());
            assert_eq!(d.respond(&p).unwrap(), 0);
        }
    }

    #[test]
    fn trained_pattern_scores_k() {
        let mut d = WizardDiscriminator::new(5, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let patterns: Vec<_> = (0..10).map(|_| random_pattern(&mut rng, d.pattern_len())).collect();
        for p in &patterns {
            d.train(p).unwrap();
        }
        for p in &patterns {
            assert_eq!(d.respond(p).unwrap(), 5);
        }
    }

    #[test]
    fn single_altered_node_scores_k_minus_one() {
        let k = 6;
        let n = 3;
        let mut d = WizardDiscriminator::new(k, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_pattern(&mut rng, k * n);
        d.train(&p).unwrap();
        // flip one address bit of node 2 only
        let mut q = p.clone();
        q.set(2 * n, !q.get(2 * n));
        assert_eq!(d.respond(&q).unwrap(), k - 1);
    }

    #[test]
    fn training_is_idempotent() {
        let mut once = WizardDiscriminator::new(3, 4).unwrap();
        let mut twice = once.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = random_pattern(&mut rng, once.pattern_len());
        once.train(&p).unwrap();
        twice.train(&p).unwrap();
        twice.train(&p).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn training_order_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut forward = WizardDiscriminator::with_random_mapping(4, 4, 99).unwrap();
        let mut backward = forward.clone();
        let patterns: Vec<_> = (0..20)
            .map(|_| random_pattern(&mut rng, forward.pattern_len()))
            .collect();
        for p in &patterns {
            forward.train(p).unwrap();
        }
        for p in patterns.iter().rev() {
            backward.train(p).unwrap();
        }
        assert_eq!(forward, backward);
    }

    #[test]
    fn response_bounds() {
        let mut d = WizardDiscriminator::new(4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            d.train(&random_pattern(&mut rng, d.pattern_len())).unwrap();
            let r = d.respond(&random_pattern(&mut rng, d.pattern_len())).unwrap();
            assert!(r <= d.num_nodes());
        }
    }

    #[test]
    fn classify_recognizes_own_class() {
        // two classes trained on patterns with disjoint node addresses
        let k = 4;
        let n = 2;
        let mut d0 = WizardDiscriminator::new(k, n).unwrap();
        let mut d1 = WizardDiscriminator::new(k, n).unwrap();
        let p0 = BinaryVector::from_fn(k * n, |_| false); // all nodes read address 00
        let p1 = BinaryVector::from_fn(k * n, |_| true); // all nodes read address 11
        d0.train(&p0).unwrap();
        d1.train(&p1).unwrap();
        let bank = [d0, d1];
        assert_eq!(wizard_classify(&bank, &p0).unwrap(), 0);
        assert_eq!(wizard_classify(&bank, &p1).unwrap(), 1);
    }

    #[test]
    fn classify_tie_and_degenerate_rules() {
        let d = WizardDiscriminator::new(2, 2).unwrap();
        let p = BinaryVector::zeros(4);
        // single discriminator: always class 0
        assert_eq!(wizard_classify(core::slice::from_ref(&d), &p).unwrap(), 0);
        // equal (zero) responses: class 0
        assert_eq!(wizard_classify(&[d.clone(), d], &p).unwrap(), 0);
        assert!(wizard_classify(&[], &p).is_err());
    }

    #[test]
    fn geometry_checks() {
        let d = WizardDiscriminator::new(2, 3).unwrap();
        assert!(d.respond(&BinaryVector::zeros(5)).is_err());
        let other = WizardDiscriminator::new(3, 3).unwrap();
        assert!(wizard_classify(&[d, other], &BinaryVector::zeros(6)).is_err());
        assert!(WizardDiscriminator::new(0, 3).is_err());
        assert!(WizardDiscriminator::from_parts(2, 2, alloc::vec![0, 0, 1, 2], alloc::vec![]).is_err());
    }

    #[test]
    fn random_mapping_is_a_seeded_bijection() {
        let a = WizardDiscriminator::with_random_mapping(3, 4, 7).unwrap();
        let b = WizardDiscriminator::with_random_mapping(3, 4, 7).unwrap();
        let c = WizardDiscriminator::with_random_mapping(3, 4, 8).unwrap();
        assert_eq!(a.mapping(), b.mapping());
        assert_ne!(a.mapping(), c.mapping());
        let mut sorted = a.mapping().to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..12).collect::<Vec<_>>());
    }
}
