//! Permutation groups backed by a base and strong generating set.
//!
//! The stabilizer chain is built by a randomized Schreier-Sims pass followed
//! by a deterministic Schreier-generator verification sweep, so the reported
//! order is a certificate rather than a probabilistic estimate.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;

const ABSENT: u32 = u32::MAX;

/// One level of the stabilizer chain: the subgroup fixing all earlier base
/// points, with the orbit and transversal of its own base point.
#[derive(Clone)]
pub(crate) struct ChainLevel {
    pub base_point: u16,
    /// Orbit of `base_point` in discovery order; `orbit[0] == base_point`.
    pub orbit: Vec<u16>,
    /// Position of each point in `orbit`, or `ABSENT`.
    pub orbit_pos: Vec<u32>,
    /// `transversal[i]` maps `base_point` to `orbit[i]`.
    pub transversal: Vec<Permutation>,
    pub transversal_inv: Vec<Permutation>,
}

impl ChainLevel {
    fn new(degree: usize, base_point: u16) -> Self {
        let mut orbit_pos = vec![ABSENT; degree];
        orbit_pos[base_point as usize] = 0;
        ChainLevel {
            base_point,
            orbit: vec![base_point],
            orbit_pos,
            transversal: vec![Permutation::identity(degree)],
            transversal_inv: vec![Permutation::identity(degree)],
        }
    }

    pub fn in_orbit(&self, point: u16) -> bool {
        self.orbit_pos[point as usize] != ABSENT
    }

    pub fn transversal_for(&self, point: u16) -> Option<&Permutation> {
        let pos = self.orbit_pos[point as usize];
        if pos == ABSENT {
            None
        } else {
            Some(&self.transversal[pos as usize])
        }
    }

    pub fn transversal_inv_for(&self, point: u16) -> Option<&Permutation> {
        let pos = self.orbit_pos[point as usize];
        if pos == ABSENT {
            None
        } else {
            Some(&self.transversal_inv[pos as usize])
        }
    }
}

/// A permutation group with a verified base and strong generating set.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<ChainLevel>,
    order: BigUint,
}

impl PermGroup {
    /// Build the group generated by `gens`, certifying the stabilizer chain.
    ///
    /// `seed` drives the randomized construction phase only; the resulting
    /// order and base are deterministic for a fixed seed.
    pub fn from_generators(gens: Vec<Permutation>, seed: u64) -> Result<PermGroup> {
        Self::build(gens, &[], false, seed)
    }

    /// Like [`from_generators`](Self::from_generators) but forces the chain
    /// base to start with the given points, keeping levels whose orbit is
    /// trivial. Used for base testing and for rebasing before decoding.
    pub fn from_generators_with_base(
        gens: Vec<Permutation>,
        base_prefix: &[u16],
        seed: u64,
    ) -> Result<PermGroup> {
        Self::build(gens, base_prefix, true, seed)
    }

    fn build(
        gens: Vec<Permutation>,
        base_prefix: &[u16],
        keep_trivial_levels: bool,
        seed: u64,
    ) -> Result<PermGroup> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let degree = gens[0].degree();
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        for &p in base_prefix {
            if p as usize >= degree {
                return Err(Error::PointOutOfRange {
                    point: p as u32 + 1,
                    degree,
                });
            }
        }

        let mut builder = Builder {
            degree,
            levels: Vec::new(),
            sgens: Vec::new(),
            base_prefix: base_prefix.to_vec(),
            keep_trivial_levels,
        };
        if keep_trivial_levels {
            for &p in base_prefix {
                let level = ChainLevel::new(degree, p);
                builder.levels.push(level);
            }
        }
        for g in &gens {
            builder.add_generator(g.clone());
        }

        // Randomized phase: sift random words of the current strong
        // generators, planting residues where they fail. This fills in most
        // of the chain cheaply before the verification sweep.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut quiet_rounds = 0;
        while quiet_rounds < 8 && !builder.levels.is_empty() {
            let word = builder.random_word(&mut rng);
            let (residue, _) = builder.sift(0, word);
            if residue.is_identity() {
                quiet_rounds += 1;
            } else {
                quiet_rounds = 0;
                builder.add_generator(residue);
            }
        }

        // Deterministic sweep: verify every Schreier generator of every
        // level, repairing the chain until a clean pass. This is what makes
        // the order a certificate.
        builder.verify_sweep();

        let order = builder
            .levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len()))
            .product::<BigUint>()
            .max(BigUint::one());

        Ok(PermGroup {
            degree,
            generators: gens,
            levels: builder.levels,
            order,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// Base points of the stabilizer chain, in chain order.
    pub fn base(&self) -> Vec<u16> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub(crate) fn levels(&self) -> &[ChainLevel] {
        &self.levels
    }

    /// Strip `g` through the chain starting at `from_level`. Returns the
    /// residue and the level at which stripping stopped.
    pub(crate) fn sift_from(&self, from_level: usize, g: &Permutation) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from_level) {
            let delta = h.apply(level.base_point);
            match level.transversal_inv_for(delta) {
                None => return (h, i),
                Some(tinv) => h = h.compose(tinv),
            }
        }
        (h, self.levels.len())
    }

    /// Membership test by sifting.
    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        let (residue, _) = self.sift_from(0, p);
        Ok(residue.is_identity())
    }

    /// Orbit of a point under the full generator set, in BFS order.
    pub fn orbit(&self, point: u16) -> Result<Vec<u16>> {
        if point as usize >= self.degree {
            return Err(Error::PointOutOfRange {
                point: point as u32 + 1,
                degree: self.degree,
            });
        }
        let mut pos = vec![false; self.degree];
        let mut orbit = vec![point];
        pos[point as usize] = true;
        let mut head = 0;
        while head < orbit.len() {
            let delta = orbit[head];
            head += 1;
            for gen in &self.generators {
                let eps = gen.apply(delta);
                if !pos[eps as usize] {
                    pos[eps as usize] = true;
                    orbit.push(eps);
                }
            }
        }
        Ok(orbit)
    }

    /// A uniformly random element, drawn through the chain transversals.
    /// Used internally where exact uniformity matters more than matching
    /// the product-replacement stream.
    pub(crate) fn uniform_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let pick = rng.gen_range(0..level.orbit.len());
            g = g.compose(&level.transversal[pick]);
        }
        g
    }

    /// Every group element by breadth-first closure, or `None` once more
    /// than `cap` elements appear. Intended for small groups and for
    /// brute-force cross-checks.
    pub fn elements_capped(&self, cap: usize) -> Option<Vec<Permutation>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = vec![self.identity()];
        seen.insert(self.identity());
        let mut head = 0;
        while head < out.len() {
            let current = out[head].clone();
            head += 1;
            for gen in &self.generators {
                let next = current.compose(gen);
                if seen.insert(next.clone()) {
                    if out.len() >= cap {
                        return None;
                    }
                    out.push(next);
                }
            }
        }
        Some(out)
    }

    /// True when this is the full symmetric group in its natural action.
    pub fn is_natural_symmetric(&self) -> bool {
        self.order == factorial(self.degree)
    }

    /// True when this is the alternating group in its natural action
    /// (the unique index-2 subgroup of the symmetric group).
    pub fn is_natural_alternating(&self) -> bool {
        self.degree >= 3 && &self.order * 2u32 == factorial(self.degree)
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    let mut out = BigUint::one();
    for k in 2..=n {
        out *= BigUint::from(k);
    }
    out
}

struct Builder {
    degree: usize,
    levels: Vec<ChainLevel>,
    /// Every strong generator with the level it belongs to: it fixes the
    /// base points of all earlier levels and moves its own level's base
    /// point. The generating set of the level-`i` group is every stored
    /// generator with `level >= i`, so the list is append-only and pair
    /// watermarks in the verification sweep stay valid.
    sgens: Vec<(Permutation, usize)>,
    base_prefix: Vec<u16>,
    keep_trivial_levels: bool,
}

impl Builder {
    /// Record a strong generator. Its level is the first chain level whose
    /// base point it moves (so it participates in the orbits of that level
    /// and every earlier one); a generator fixing every existing base point
    /// opens a new level. Every affected orbit is re-extended.
    fn add_generator(&mut self, g: Permutation) {
        if g.is_identity() {
            return;
        }
        let level = match self
            .levels
            .iter()
            .position(|l| g.apply(l.base_point) != l.base_point)
        {
            Some(level) => level,
            None => {
                let base_point = self.choose_base_point(&g);
                self.levels.push(ChainLevel::new(self.degree, base_point));
                self.levels.len() - 1
            }
        };
        self.sgens.push((g, level));
        for i in 0..=level {
            self.extend_orbit(i);
        }
    }

    fn choose_base_point(&self, g: &Permutation) -> u16 {
        if !self.keep_trivial_levels {
            for &p in &self.base_prefix {
                if self.levels.iter().all(|l| l.base_point != p) && g.apply(p) != p {
                    return p;
                }
            }
        }
        g.min_moved().expect("non-identity permutation moves a point")
    }

    /// Grow the orbit of level `i` under every generator belonging to it.
    /// Existing transversal entries are kept so earlier verification work
    /// stays valid.
    fn extend_orbit(&mut self, i: usize) {
        let mut head = 0;
        while head < self.levels[i].orbit.len() {
            let delta = self.levels[i].orbit[head];
            let pos = self.levels[i].orbit_pos[delta as usize] as usize;
            head += 1;
            for k in 0..self.sgens.len() {
                if self.sgens[k].1 < i {
                    continue;
                }
                let eps = self.sgens[k].0.apply(delta);
                if self.levels[i].orbit_pos[eps as usize] == ABSENT {
                    let t = self.levels[i].transversal[pos].compose(&self.sgens[k].0);
                    let level = &mut self.levels[i];
                    level.orbit_pos[eps as usize] = level.orbit.len() as u32;
                    level.orbit.push(eps);
                    level.transversal_inv.push(t.inverse());
                    level.transversal.push(t);
                }
            }
        }
    }

    fn sift(&self, from_level: usize, g: Permutation) -> (Permutation, usize) {
        let mut h = g;
        for (i, level) in self.levels.iter().enumerate().skip(from_level) {
            let delta = h.apply(level.base_point);
            match level.transversal_inv_for(delta) {
                None => return (h, i),
                Some(tinv) => h = h.compose(tinv),
            }
        }
        (h, self.levels.len())
    }

    fn random_word<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut w = Permutation::identity(self.degree);
        let len = rng.gen_range(2..=6);
        for _ in 0..len {
            let pick = &self.sgens[rng.gen_range(0..self.sgens.len())].0;
            if rng.gen_bool(0.5) {
                w = w.compose(pick);
            } else {
                w = w.compose(&pick.inverse());
            }
        }
        w
    }

    /// Verify every Schreier generator of every level, inserting residues
    /// until a clean pass over all levels. Per-level watermarks skip pairs
    /// that were already checked; both the orbit arrays and the generator
    /// list only ever grow, so old pair indices never change meaning.
    fn verify_sweep(&mut self) {
        let mut done: Vec<(usize, usize)> = Vec::new();
        loop {
            done.resize(self.levels.len(), (0, 0));
            let mut changed = false;
            let mut i = 0;
            while i < self.levels.len() {
                done.resize(self.levels.len(), (0, 0));
                let (orbit_done, gens_done) = done[i];
                let orbit_len = self.levels[i].orbit.len();
                let gens_len = self.sgens.len();
                if orbit_done == orbit_len && gens_done == gens_len {
                    i += 1;
                    continue;
                }
                done[i] = (orbit_len, gens_len);
                for oi in 0..orbit_len {
                    for k in 0..gens_len {
                        if oi < orbit_done && k < gens_done {
                            continue;
                        }
                        if self.sgens[k].1 < i {
                            continue;
                        }
                        let schreier = {
                            let level = &self.levels[i];
                            let t = &level.transversal[oi];
                            let s = &self.sgens[k].0;
                            let target = s.apply(level.orbit[oi]);
                            let tinv = level
                                .transversal_inv_for(target)
                                .expect("orbit closed under its generators");
                            t.compose(s).compose(tinv)
                        };
                        if schreier.is_identity() {
                            continue;
                        }
                        let (residue, _) = self.sift(i + 1, schreier);
                        if !residue.is_identity() {
                            self.add_generator(residue);
                            changed = true;
                        }
                    }
                }
                // additions may have grown this level's orbit or the
                // generator list; stay on the level until it is clean
                if done[i] != (self.levels[i].orbit.len(), self.sgens.len()) {
                    continue;
                }
                i += 1;
            }
            if !changed {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_perm;

    fn s(n: usize) -> PermGroup {
        let cycle: Vec<u32> = (1..=n as u32).collect();
        let txt = format!(
            "({})",
            cycle.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        );
        let gens = vec![parse_perm("(1,2)", n).unwrap(), parse_perm(&txt, n).unwrap()];
        PermGroup::from_generators(gens, 1).unwrap()
    }

    #[test]
    fn symmetric_orders() {
        for n in 2..=8 {
            assert_eq!(s(n).order(), &factorial(n), "S{n}");
        }
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::from_generators(vec![Permutation::identity(4)], 0).unwrap();
        assert_eq!(g.order(), &BigUint::one());
        assert!(g.contains(&Permutation::identity(4)).unwrap());
        assert!(!g.contains(&parse_perm("(1,2)", 4).unwrap()).unwrap());
    }

    #[test]
    fn a4_membership() {
        let a4 = PermGroup::from_generators(
            vec![
                parse_perm("(1,2,3)", 4).unwrap(),
                parse_perm("(2,3,4)", 4).unwrap(),
            ],
            7,
        )
        .unwrap();
        assert_eq!(a4.order(), &BigUint::from(12u32));
        assert!(a4.contains(&parse_perm("(1,2)(3,4)", 4).unwrap()).unwrap());
        assert!(!a4.contains(&parse_perm("(1,2)", 4).unwrap()).unwrap());
    }

    #[test]
    fn orbit_transitive() {
        let g = s(5);
        let orb = g.orbit(0).unwrap();
        assert_eq!(orb.len(), 5);
        let id = PermGroup::from_generators(vec![Permutation::identity(5)], 0).unwrap();
        assert_eq!(id.orbit(2).unwrap(), vec![2]);
    }

    #[test]
    fn orbit_partition_covers_degree() {
        let g = PermGroup::from_generators(
            vec![
                parse_perm("(1,2,3)", 7).unwrap(),
                parse_perm("(4,5)", 7).unwrap(),
            ],
            0,
        )
        .unwrap();
        let mut covered = 0;
        let mut seen = vec![false; 7];
        for p in 0..7u16 {
            if seen[p as usize] {
                continue;
            }
            let orb = g.orbit(p).unwrap();
            covered += orb.len();
            for q in orb {
                seen[q as usize] = true;
            }
        }
        assert_eq!(covered, 7);
    }

    #[test]
    fn natural_symmetric_alternating_detection() {
        assert!(s(6).is_natural_symmetric());
        let a5 = PermGroup::from_generators(
            vec![
                parse_perm("(1,2,3)", 5).unwrap(),
                parse_perm("(1,2,3,4,5)", 5).unwrap(),
            ],
            3,
        )
        .unwrap();
        assert!(a5.is_natural_alternating());
        assert!(!a5.is_natural_symmetric());
    }

    #[test]
    fn prescribed_base_keeps_trivial_levels() {
        let g = PermGroup::from_generators_with_base(
            vec![parse_perm("(3,4)", 4).unwrap()],
            &[0, 1],
            0,
        )
        .unwrap();
        assert_eq!(g.base()[0], 0);
        assert_eq!(g.base()[1], 1);
        assert_eq!(g.order(), &BigUint::from(2u32));
    }

    #[test]
    fn generators_all_members() {
        let g = s(7);
        for gen in g.generators() {
            assert!(g.contains(gen).unwrap());
        }
    }
}
