//! Conjugacy machinery: class enumeration, conjugacy testing with witnesses,
//! and centralizers.
//!
//! Two complementary strategies are used. Small classes are enumerated as a
//! breadth-first conjugation orbit with back-pointers, which answers
//! membership queries exactly and yields conjugating witnesses. Large classes
//! are handled by a backtrack search over the stabilizer chain that assigns
//! base-point images and propagates the intertwining constraint
//! `x(a(p)) = b(x(p))` along cycles. The two regimes cover each other's weak
//! spots: elements with many short cycles have large centralizers and small
//! classes (cheap enumeration), while elements with long cycles have rigid
//! cycle structure (strong backtrack propagation).

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Default cap on enumerated class size: at ~28 bytes per degree-28 element,
/// 2^20 elements is roughly 30 MB.
pub const DEFAULT_CLASS_THRESHOLD: u64 = 1 << 20;

/// Node budget for the first, opportunistic backtrack attempt.
const BACKTRACK_BUDGET: u64 = 200_000;

fn hash64(p: &Permutation) -> u64 {
    let mut h = DefaultHasher::new();
    p.hash(&mut h);
    h.finish()
}

/// A fully enumerated conjugacy class with BFS back-pointers.
pub(crate) struct EnumeratedClass {
    pub elements: Vec<Permutation>,
    /// hash -> indices into `elements` (collision lists are rare)
    index: HashMap<u64, Vec<u32>>,
    /// (parent index, generator index); entry 0 is the seed
    parents: Vec<(u32, u32)>,
}

impl EnumeratedClass {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, p: &Permutation) -> Option<usize> {
        let bucket = self.index.get(&hash64(p))?;
        bucket
            .iter()
            .copied()
            .map(|i| i as usize)
            .find(|&i| &self.elements[i] == p)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.position(p).is_some()
    }

    /// Conjugator `w` with `seed^w = elements[idx]`, rebuilt from the BFS
    /// tree (gens are the group generators the class was enumerated under).
    pub fn witness(&self, gens: &[Permutation], idx: usize) -> Permutation {
        let degree = self.elements[0].degree();
        let mut path = Vec::new();
        let mut at = idx as u32;
        while at != 0 {
            let (parent, gen) = self.parents[at as usize];
            path.push(gen);
            at = parent;
        }
        let mut w = Permutation::identity(degree);
        for &gi in path.iter().rev() {
            w = w.compose(&gens[gi as usize]);
        }
        w
    }
}

pub(crate) enum EnumerationOutcome {
    Complete(EnumeratedClass),
    CapExceeded,
}

/// Breadth-first closure of `{seed^x : x in G}` under conjugation by the
/// generators, aborting once more than `cap` elements appear.
pub(crate) fn enumerate_class(
    gens: &[Permutation],
    seed: &Permutation,
    cap: u64,
) -> EnumerationOutcome {
    let mut class = EnumeratedClass {
        elements: vec![seed.clone()],
        index: HashMap::new(),
        parents: vec![(0, 0)],
    };
    class.index.insert(hash64(seed), vec![0]);
    let mut head = 0usize;
    while head < class.elements.len() {
        for gi in 0..gens.len() {
            let next = class.elements[head].conjugate_by(&gens[gi]);
            let h = hash64(&next);
            let bucket = class.index.entry(h).or_default();
            if bucket
                .iter()
                .any(|&i| class.elements[i as usize] == next)
            {
                continue;
            }
            if class.elements.len() as u64 >= cap {
                return EnumerationOutcome::CapExceeded;
            }
            bucket.push(class.elements.len() as u32);
            class.parents.push((head as u32, gi as u32));
            class.elements.push(next);
        }
        head += 1;
    }
    EnumerationOutcome::Complete(class)
}

enum BacktrackOutcome {
    Found(Permutation),
    Exhausted,
    BudgetHit,
}

/// Backtrack search for `x in G` with `x^-1 a x = b`.
struct ConjSearch<'a> {
    group: &'a PermGroup,
    a: &'a Permutation,
    b: &'a Permutation,
    /// partial images of x; u32::MAX = unassigned
    ximg: Vec<u32>,
    xpre: Vec<u32>,
    trail: Vec<u16>,
    nodes: u64,
    budget: Option<u64>,
    a_cycle_len: Vec<u32>,
    b_cycle_len: Vec<u32>,
}

const UNSET: u32 = u32::MAX;

fn cycle_lengths(p: &Permutation) -> Vec<u32> {
    let n = p.degree();
    let mut lens = vec![0u32; n];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut q = start;
        while !seen[q] {
            seen[q] = true;
            cycle.push(q);
            q = p.apply(q as u16) as usize;
        }
        for &pt in &cycle {
            lens[pt] = cycle.len() as u32;
        }
    }
    lens
}

impl<'a> ConjSearch<'a> {
    fn new(group: &'a PermGroup, a: &'a Permutation, b: &'a Permutation, budget: Option<u64>) -> Self {
        let n = group.degree();
        ConjSearch {
            group,
            a,
            b,
            ximg: vec![UNSET; n],
            xpre: vec![UNSET; n],
            trail: Vec::new(),
            nodes: 0,
            budget,
            a_cycle_len: cycle_lengths(a),
            b_cycle_len: cycle_lengths(b),
        }
    }

    /// Assign `x(p) = q` and propagate along the a-cycle through `p`:
    /// `x(a^k(p)) = b^k(q)`. Returns false on conflict.
    fn propagate(&mut self, p: u16, q: u16) -> bool {
        if self.a_cycle_len[p as usize] != self.b_cycle_len[q as usize] {
            return false;
        }
        let mut cp = p;
        let mut cq = q;
        loop {
            match self.ximg[cp as usize] {
                UNSET => {
                    if self.xpre[cq as usize] != UNSET {
                        return false;
                    }
                    self.ximg[cp as usize] = cq as u32;
                    self.xpre[cq as usize] = cp as u32;
                    self.trail.push(cp);
                }
                assigned if assigned != cq as u32 => return false,
                _ => {}
            }
            cp = self.a.apply(cp);
            cq = self.b.apply(cq);
            if cp == p {
                return cq == q;
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let p = self.trail.pop().unwrap();
            let q = self.ximg[p as usize];
            self.ximg[p as usize] = UNSET;
            self.xpre[q as usize] = UNSET;
        }
    }

    fn run(&mut self) -> BacktrackOutcome {
        let t = Permutation::identity(self.group.degree());
        self.dfs(0, &t)
    }

    fn dfs(&mut self, level: usize, t: &Permutation) -> BacktrackOutcome {
        self.nodes += 1;
        if let Some(budget) = self.budget {
            if self.nodes > budget {
                return BacktrackOutcome::BudgetHit;
            }
        }
        let levels = self.group.levels();
        if level == levels.len() {
            // t is fully determined; propagation may not cover every point,
            // so the conjugation equation is checked directly
            if self.a.conjugate_by(t) == *self.b {
                return BacktrackOutcome::Found(t.clone());
            }
            return BacktrackOutcome::Exhausted;
        }
        let chain = &levels[level];
        let beta = chain.base_point;

        let forced = self.ximg[beta as usize];
        if forced != UNSET {
            // x(beta) is already pinned by propagation; at most one coset fits
            let delta = t.inverse().apply(forced as u16);
            if !chain.in_orbit(delta) {
                return BacktrackOutcome::Exhausted;
            }
            let t_next = chain
                .transversal_for(delta)
                .expect("orbit membership checked")
                .compose(t);
            return self.dfs(level + 1, &t_next);
        }
        for oi in 0..chain.orbit.len() {
            let delta = chain.orbit[oi];
            let gamma = t.apply(delta);
            let mark = self.trail.len();
            if !self.propagate(beta, gamma) {
                self.undo_to(mark);
                continue;
            }
            let t_next = chain.transversal[oi].compose(t);
            match self.dfs(level + 1, &t_next) {
                BacktrackOutcome::Exhausted => {
                    self.undo_to(mark);
                }
                other => return other,
            }
        }
        BacktrackOutcome::Exhausted
    }
}

/// Find `x in G` with `x^-1 a x = b`, or certify there is none.
///
/// `threshold` caps class enumeration; both arguments must be members of
/// the group.
pub fn are_conjugate(
    group: &PermGroup,
    a: &Permutation,
    b: &Permutation,
    threshold: u64,
) -> Result<Option<Permutation>> {
    if !group.contains(a)? || !group.contains(b)? {
        return Err(Error::NotInGroup);
    }
    Ok(are_conjugate_unchecked(group, a, b, threshold))
}

/// Same as [`are_conjugate`] without the membership precondition checks.
pub(crate) fn are_conjugate_unchecked(
    group: &PermGroup,
    a: &Permutation,
    b: &Permutation,
    threshold: u64,
) -> Option<Permutation> {
    if a == b {
        return Some(group.identity());
    }
    if a.cycle_type() != b.cycle_type() {
        return None;
    }
    let mut budgeted = ConjSearch::new(group, a, b, Some(BACKTRACK_BUDGET));
    match budgeted.run() {
        BacktrackOutcome::Found(x) => return Some(x),
        BacktrackOutcome::Exhausted => return None,
        BacktrackOutcome::BudgetHit => {}
    }
    match enumerate_class(group.generators(), a, threshold) {
        EnumerationOutcome::Complete(class) => class
            .position(b)
            .map(|idx| class.witness(group.generators(), idx)),
        EnumerationOutcome::CapExceeded => {
            // last resort: complete search without a budget
            let mut full = ConjSearch::new(group, a, b, None);
            match full.run() {
                BacktrackOutcome::Found(x) => Some(x),
                _ => None,
            }
        }
    }
}

pub(crate) enum BudgetedConjugacy {
    Conjugate(Permutation),
    NotConjugate,
    Undecided,
}

/// Backtrack-only conjugacy test with a node budget; `Undecided` means the
/// budget ran out before the search tree was exhausted.
pub(crate) fn budgeted_conjugacy(
    group: &PermGroup,
    a: &Permutation,
    b: &Permutation,
    budget: u64,
) -> BudgetedConjugacy {
    if a == b {
        return BudgetedConjugacy::Conjugate(group.identity());
    }
    if a.cycle_type() != b.cycle_type() {
        return BudgetedConjugacy::NotConjugate;
    }
    let mut search = ConjSearch::new(group, a, b, Some(budget));
    match search.run() {
        BacktrackOutcome::Found(x) => BudgetedConjugacy::Conjugate(x),
        BacktrackOutcome::Exhausted => BudgetedConjugacy::NotConjugate,
        BacktrackOutcome::BudgetHit => BudgetedConjugacy::Undecided,
    }
}

/// Size of the conjugacy class of `elem`, by enumeration.
pub(crate) fn class_size_by_enumeration(
    group: &PermGroup,
    elem: &Permutation,
    threshold: u64,
) -> Result<EnumeratedClass> {
    match enumerate_class(group.generators(), elem, threshold) {
        EnumerationOutcome::Complete(class) => Ok(class),
        EnumerationOutcome::CapExceeded => Err(Error::ClassTooLarge {
            size: format!("> {threshold}"),
            threshold,
        }),
    }
}

/// The centralizer `{x in G : x g = g x}` as a certified subgroup.
///
/// The conjugation orbit of `g` is enumerated; random coincidences
/// `x * w^-1` (where `w` is the orbit witness of `g^x`) centralize `g`, and
/// generators are accumulated until the subgroup order reaches
/// `|G| / |class|`, which is exact by orbit-stabilizer.
pub fn centralizer(
    group: &PermGroup,
    g: &Permutation,
    threshold: u64,
    seed: u64,
) -> Result<PermGroup> {
    if !group.contains(g)? {
        return Err(Error::NotInGroup);
    }
    if group.generators().iter().all(|s| s.compose(g) == g.compose(s)) {
        // central element: the centralizer is the whole group
        return Ok(group.clone());
    }
    let class = class_size_by_enumeration(group, g, threshold)?;
    let target = group.order() / BigUint::from(class.len());
    debug_assert!(!target.is_zero());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens: Vec<Permutation> = vec![g.clone()];
    let mut sub = PermGroup::from_generators(gens.clone(), seed)?;
    while sub.order() < &target {
        let x = group.uniform_element(&mut rng);
        let h = g.conjugate_by(&x);
        let idx = class.position(&h).expect("conjugate lies in the class");
        let w = class.witness(group.generators(), idx);
        let c = x.compose(&w.inverse());
        debug_assert_eq!(g.conjugate_by(&c), *g);
        if !sub.contains(&c)? {
            gens.push(c);
            sub = PermGroup::from_generators(gens.clone(), seed)?;
        }
    }
    assert_eq!(sub.order(), &target, "orbit-stabilizer certificate");
    Ok(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_perm;

    fn group(gens: &[&str], degree: usize) -> PermGroup {
        let gens = gens
            .iter()
            .map(|s| parse_perm(s, degree).unwrap())
            .collect();
        PermGroup::from_generators(gens, 11).unwrap()
    }

    fn s4() -> PermGroup {
        group(&["(1,2)", "(1,2,3,4)"], 4)
    }

    fn a4() -> PermGroup {
        group(&["(1,2,3)", "(2,3,4)"], 4)
    }

    #[test]
    fn transpositions_conjugate_in_s4() {
        let g = s4();
        let a = parse_perm("(1,2)", 4).unwrap();
        let b = parse_perm("(3,4)", 4).unwrap();
        let x = are_conjugate(&g, &a, &b, 1 << 20).unwrap().unwrap();
        assert_eq!(a.conjugate_by(&x), b);
        assert!(g.contains(&x).unwrap());
    }

    #[test]
    fn three_cycles_split_in_a4() {
        let g = a4();
        let a = parse_perm("(1,2,3)", 4).unwrap();
        let b = parse_perm("(1,3,2)", 4).unwrap();
        assert!(are_conjugate(&g, &a, &b, 1 << 20).unwrap().is_none());
    }

    #[test]
    fn brute_force_agreement() {
        // every pair of elements in S4, A4, D8
        let d8 = group(&["(1,2,3,4)", "(1,3)"], 4);
        for g in [s4(), a4(), d8] {
            let elems = g.elements_capped(100).unwrap();
            for a in &elems {
                for b in &elems {
                    let brute = elems.iter().any(|x| &a.conjugate_by(x) == b);
                    let fast = are_conjugate(&g, a, b, 1 << 20).unwrap();
                    assert_eq!(fast.is_some(), brute, "{a} vs {b}");
                    if let Some(x) = fast {
                        assert_eq!(a.conjugate_by(&x), *b);
                    }
                }
            }
        }
    }

    #[test]
    fn backtrack_handles_large_class() {
        // 8-cycles in S8: class size 5040, test the backtrack path directly
        let g = group(&["(1,2)", "(1,2,3,4,5,6,7,8)"], 8);
        let a = parse_perm("(1,2,3,4,5,6,7,8)", 8).unwrap();
        let b = parse_perm("(8,7,6,5,4,3,2,1)", 8).unwrap();
        let mut search = ConjSearch::new(&g, &a, &b, None);
        match search.run() {
            BacktrackOutcome::Found(x) => assert_eq!(a.conjugate_by(&x), b),
            _ => panic!("8-cycles are conjugate in S8"),
        }
    }

    #[test]
    fn centralizer_of_four_cycle_in_s4() {
        let g = s4();
        let c = parse_perm("(1,2,3,4)", 4).unwrap();
        let cent = centralizer(&g, &c, 1 << 20, 5).unwrap();
        assert_eq!(cent.order(), &BigUint::from(4u32));
        // brute force: exactly the powers of c
        let elems = g.elements_capped(24).unwrap();
        let brute: Vec<_> = elems
            .iter()
            .filter(|x| x.compose(&c) == c.compose(x))
            .collect();
        assert_eq!(brute.len(), 4);
        for x in brute {
            assert!(cent.contains(x).unwrap());
        }
    }

    #[test]
    fn centralizer_of_identity_is_group() {
        let g = s4();
        let cent = centralizer(&g, &Permutation::identity(4), 1 << 20, 0).unwrap();
        assert_eq!(cent.order(), g.order());
    }

    #[test]
    fn enumeration_witnesses_check_out() {
        let g = s4();
        let a = parse_perm("(1,2,3)", 4).unwrap();
        let class = class_size_by_enumeration(&g, &a, 1 << 20).unwrap();
        assert_eq!(class.len(), 8);
        for i in 0..class.len() {
            let w = class.witness(g.generators(), i);
            assert_eq!(a.conjugate_by(&w), class.elements[i]);
        }
    }
}
