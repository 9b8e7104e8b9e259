//! Seed-deterministic random group elements via product replacement.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::PermGroup;
use crate::perm::Permutation;

/// Number of generator slots kept in the product-replacement state.
const SLOTS: usize = 10;
/// Rattle steps performed before the first element is drawn.
const BURN_IN: usize = 64;
/// Rattle steps per drawn element.
const STEPS_PER_DRAW: usize = 2;

/// A deterministic stream of approximately uniform group elements.
///
/// The state is the classic product-replacement list plus an accumulator:
/// every step replaces a random slot with its product by another random slot
/// (or its inverse, on either side) and folds the result into the
/// accumulator. Identical seeds over the same group give identical streams.
pub struct RandomSource {
    seed: u64,
    slots: Vec<Permutation>,
    accumulator: Permutation,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(group: &PermGroup, seed: u64) -> RandomSource {
        let gens = group.generators();
        let mut slots = Vec::with_capacity(SLOTS);
        for i in 0..SLOTS.max(gens.len()) {
            slots.push(gens[i % gens.len()].clone());
        }
        let mut src = RandomSource {
            seed,
            slots,
            accumulator: group.identity(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for _ in 0..BURN_IN {
            src.step();
        }
        src
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derive a child seed for a parallel worker or a per-class stream.
    pub fn derive_seed(master: u64, index: u64) -> u64 {
        // splitmix64 finalizer over the pair
        let mut z = master ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn step(&mut self) {
        let n = self.slots.len();
        let i = self.rng.gen_range(0..n);
        let j = {
            let v = self.rng.gen_range(0..n - 1);
            if v >= i {
                v + 1
            } else {
                v
            }
        };
        let other = if self.rng.gen_bool(0.5) {
            self.slots[j].clone()
        } else {
            self.slots[j].inverse()
        };
        self.slots[i] = if self.rng.gen_bool(0.5) {
            self.slots[i].compose(&other)
        } else {
            other.compose(&self.slots[i])
        };
        self.accumulator = self.accumulator.compose(&self.slots[i]);
    }

    /// The next element of the stream.
    pub fn next_element(&mut self) -> Permutation {
        for _ in 0..STEPS_PER_DRAW {
            self.step();
        }
        self.accumulator.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_perm;

    fn s5() -> PermGroup {
        PermGroup::from_generators(
            vec![
                parse_perm("(1,2)", 5).unwrap(),
                parse_perm("(1,2,3,4,5)", 5).unwrap(),
            ],
            0,
        )
        .unwrap()
    }

    #[test]
    fn deterministic_stream() {
        let g = s5();
        let mut a = RandomSource::new(&g, 42);
        let mut b = RandomSource::new(&g, 42);
        for _ in 0..100 {
            assert_eq!(a.next_element(), b.next_element());
        }
    }

    #[test]
    fn elements_are_members() {
        let g = s5();
        let mut src = RandomSource::new(&g, 7);
        for _ in 0..1000 {
            assert!(g.contains(&src.next_element()).unwrap());
        }
    }

    #[test]
    fn different_seeds_diverge() {
        let g = s5();
        let mut a = RandomSource::new(&g, 1);
        let mut b = RandomSource::new(&g, 2);
        let same = (0..50).filter(|_| a.next_element() == b.next_element()).count();
        assert!(same < 50);
    }
}
