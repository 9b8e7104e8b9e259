//! Conjugacy-class tables: enumeration, deterministic naming, power maps,
//! real/quasi-real classification and structure constants.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::conjugacy::{
    are_conjugate_unchecked, budgeted_conjugacy, class_size_by_enumeration, BudgetedConjugacy,
    DEFAULT_CLASS_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::group::{factorial, PermGroup};
use crate::perm::{CycleType, Permutation};
use crate::rng::RandomSource;

/// Classes whose size is at most this are kept as element sets for fast
/// membership tests after construction.
const CACHE_LIMIT: usize = 1 << 16;

/// Node budget for opportunistic backtrack tests during classification.
const CLASSIFY_BUDGET: u64 = 100_000;

#[derive(Clone)]
pub struct ConjugacyClass {
    pub representative: Permutation,
    pub element_order: u64,
    pub size: BigUint,
    pub centralizer_order: BigUint,
    pub name: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuasiRealInfo {
    pub class_index: usize,
    /// Smallest `j` in `2..=order-2` with `g^j` conjugate to `g`.
    pub j: u64,
    /// Whether `g^(j^2) != g` as elements, i.e. `j^2 != 1 mod order`.
    pub j_squared_moves: bool,
}

#[derive(Clone, Debug)]
pub struct ClassTableConfig {
    /// Cap on enumerated class size.
    pub threshold: u64,
    /// Cap on candidates examined by the sampling loop.
    pub sampling_budget: u64,
    pub seed: u64,
}

impl Default for ClassTableConfig {
    fn default() -> Self {
        ClassTableConfig {
            threshold: DEFAULT_CLASS_THRESHOLD,
            sampling_budget: 200_000,
            seed: 0,
        }
    }
}

/// The conjugacy classes of a group, with a completeness certificate:
/// construction only succeeds once the class sizes sum to the group order.
pub struct ClassTable {
    group: Arc<PermGroup>,
    classes: Vec<ConjugacyClass>,
    /// element sets for small classes, reused for membership tests
    caches: Vec<Option<HashSet<Permutation>>>,
    invariant_index: HashMap<(u64, CycleType), Vec<usize>>,
    power_cache: Mutex<HashMap<i64, Arc<Vec<usize>>>>,
    threshold: u64,
}

impl ClassTable {
    /// Build the table with a fresh element stream seeded from the config.
    pub fn build(group: Arc<PermGroup>, cfg: &ClassTableConfig) -> Result<ClassTable> {
        let mut rng = RandomSource::new(&group, cfg.seed);
        conjugacy_classes(group, &mut rng, cfg)
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, index: usize) -> Result<&ConjugacyClass> {
        self.classes.get(index).ok_or(Error::BadClassIndex { index })
    }

    pub fn index_of_name(&self, name: &str) -> Result<usize> {
        self.classes
            .iter()
            .position(|c| c.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::NoSuchClass {
                name: name.to_string(),
            })
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    /// Index of the class containing `g`.
    ///
    /// Because the table is certified complete, an element whose order and
    /// cycle type match exactly one class must lie in it; conjugacy tests
    /// are only needed to split invariant ties.
    pub fn class_of(&self, g: &Permutation) -> Result<usize> {
        if !self.group.contains(g)? {
            return Err(Error::NotInGroup);
        }
        Ok(self.class_of_member(g))
    }

    fn class_of_member(&self, g: &Permutation) -> usize {
        let key = (g.order().expect("member order"), g.cycle_type());
        let matches = self
            .invariant_index
            .get(&key)
            .expect("complete table covers every member invariant");
        if matches.len() == 1 {
            return matches[0];
        }
        for &ci in matches {
            if let Some(cache) = &self.caches[ci] {
                if cache.contains(g) {
                    return ci;
                }
            }
        }
        for &ci in matches {
            if self.caches[ci].is_some() {
                continue;
            }
            if are_conjugate_unchecked(
                &self.group,
                g,
                &self.classes[ci].representative,
                self.threshold,
            )
            .is_some()
            {
                return ci;
            }
        }
        unreachable!("complete class table failed to classify a group member")
    }

    /// The map `class of g  ->  class of g^j`, cached per exponent.
    pub fn power_map(&self, j: i64) -> Arc<Vec<usize>> {
        if let Some(hit) = self.power_cache.lock().unwrap().get(&j) {
            return Arc::clone(hit);
        }
        let map: Vec<usize> = self
            .classes
            .iter()
            .map(|c| self.class_of_member(&c.representative.pow(j)))
            .collect();
        let map = Arc::new(map);
        self.power_cache
            .lock()
            .unwrap()
            .insert(j, Arc::clone(&map));
        map
    }

    /// Indices of classes closed under inversion.
    pub fn real_classes(&self) -> Vec<usize> {
        let inv = self.power_map(-1);
        (0..self.len()).filter(|&c| inv[c] == c).collect()
    }

    /// Non-real classes admitting a power `g^j` conjugate to `g`, reported
    /// with the first qualifying `j` (ascending scan, one entry per class).
    pub fn quasi_real_classes(&self) -> Vec<QuasiRealInfo> {
        let real: HashSet<usize> = self.real_classes().into_iter().collect();
        let mut out = Vec::new();
        for c in 0..self.len() {
            if real.contains(&c) {
                continue;
            }
            let order = self.classes[c].element_order;
            for j in 2..=order.saturating_sub(2) {
                if j % order == 1 {
                    continue;
                }
                if self.power_map(j as i64)[c] == c {
                    let jj = (j as u128 * j as u128) % order as u128;
                    out.push(QuasiRealInfo {
                        class_index: c,
                        j,
                        j_squared_moves: jj != 1,
                    });
                    break;
                }
            }
        }
        out
    }

    /// Every qualifying quasi-real type for one class (empty if real or
    /// never self-conjugate under powers).
    pub fn qualifying_js(&self, c: usize) -> Result<Vec<u64>> {
        let class = self.class(c)?;
        let order = class.element_order;
        let real = self.power_map(-1)[c] == c;
        if real {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for j in 2..=order.saturating_sub(2) {
            if j % order != 1 && self.power_map(j as i64)[c] == c {
                out.push(j);
            }
        }
        Ok(out)
    }

    /// The class-multiplication coefficient: for a fixed representative `g`
    /// of `c3`, the number of pairs `(a, b)` in `c1 x c2` with `a * b = g`.
    /// The count does not depend on which representative is fixed.
    pub fn structure_constant(&self, c1: usize, c2: usize, c3: usize) -> Result<BigUint> {
        let g = self.class(c3)?.representative.clone();
        let size1 = self.class(c1)?.size.clone();
        let size2 = self.class(c2)?.size.clone();
        // iterate the smaller of the two pair classes, solving for the
        // other side; the count is the same either way
        let (iter_class, member_class, forward) = if size1 <= size2 {
            (c1, c2, true)
        } else {
            (c2, c1, false)
        };
        if self.classes[iter_class].size > BigUint::from(self.threshold) {
            return Err(Error::StructureConstantTooLarge {
                threshold: self.threshold,
            });
        }
        let iter_elems = self.class_elements(iter_class)?;
        let member_set: Option<HashSet<Permutation>> = if member_class == iter_class {
            Some(iter_elems.iter().cloned().collect())
        } else if self.classes[member_class].size <= BigUint::from(self.threshold) {
            Some(self.class_elements(member_class)?.into_iter().collect())
        } else {
            None
        };
        let member_order = self.classes[member_class].element_order;
        let member_type = self.classes[member_class].representative.cycle_type();

        let mut count: u64 = 0;
        for a in &iter_elems {
            // forward: a in c1, so b = a^-1 g; backward: b in c2, a = g b^-1
            let other = if forward {
                a.inverse().compose(&g)
            } else {
                g.compose(&a.inverse())
            };
            let hit = match &member_set {
                Some(set) => set.contains(&other),
                None => {
                    other.order()? == member_order
                        && other.cycle_type() == member_type
                        && self.class_of_member(&other) == member_class
                }
            };
            if hit {
                count += 1;
            }
        }
        Ok(BigUint::from(count))
    }

    /// All elements of a class (enumerated, or straight from the cache).
    fn class_elements(&self, c: usize) -> Result<Vec<Permutation>> {
        if let Some(cache) = &self.caches[c] {
            return Ok(cache.iter().cloned().collect());
        }
        let class = class_size_by_enumeration(
            &self.group,
            &self.classes[c].representative,
            self.threshold,
        )?;
        Ok(class.elements)
    }
}

/// Compute the conjugacy classes of a group.
///
/// Natural symmetric and alternating groups are handled by cycle-type
/// enumeration with the split rule for all-odd-distinct partitions. Every
/// other group goes through the sampling loop: random elements plus power
/// closure, with the class list accepted only once the sizes sum to the
/// group order.
pub fn conjugacy_classes(
    group: Arc<PermGroup>,
    rng: &mut RandomSource,
    cfg: &ClassTableConfig,
) -> Result<ClassTable> {
    let raw = if group.is_natural_symmetric() {
        natural_classes(&group, false)
    } else if group.is_natural_alternating() {
        natural_classes(&group, true)
    } else {
        sampled_classes(&group, rng, cfg)?
    };
    finish_table(group, raw, cfg.threshold)
}

struct RawClass {
    rep: Permutation,
    order: u64,
    size: BigUint,
    cache: Option<HashSet<Permutation>>,
}

// ---------------------------------------------------------------- sampling

enum Classified {
    Known,
    New(Option<crate::conjugacy::EnumeratedClass>),
}

fn classify(
    group: &PermGroup,
    found: &[RawClass],
    index: &HashMap<(u64, CycleType), Vec<usize>>,
    g: &Permutation,
    threshold: u64,
) -> Result<Classified> {
    let key = (g.order()?, g.cycle_type());
    let matches: &[usize] = index.get(&key).map(Vec::as_slice).unwrap_or(&[]);
    if matches.is_empty() {
        return Ok(Classified::New(None));
    }
    let mut undecided = Vec::new();
    for &ci in matches {
        if let Some(cache) = &found[ci].cache {
            if cache.contains(g) {
                return Ok(Classified::Known);
            }
        } else {
            match budgeted_conjugacy(group, g, &found[ci].rep, CLASSIFY_BUDGET) {
                BudgetedConjugacy::Conjugate(x) => {
                    debug_assert_eq!(g.conjugate_by(&x), found[ci].rep);
                    return Ok(Classified::Known);
                }
                BudgetedConjugacy::NotConjugate => {}
                BudgetedConjugacy::Undecided => undecided.push(ci),
            }
        }
    }
    if undecided.is_empty() {
        return Ok(Classified::New(None));
    }
    // enumerate the candidate's class once and settle all undecided ties
    let class = class_size_by_enumeration(group, g, threshold)?;
    for ci in undecided {
        if class.contains(&found[ci].rep) {
            return Ok(Classified::Known);
        }
    }
    Ok(Classified::New(Some(class)))
}

fn sampled_classes(
    group: &Arc<PermGroup>,
    rng: &mut RandomSource,
    cfg: &ClassTableConfig,
) -> Result<Vec<RawClass>> {
    let target = group.order().clone();
    let mut found: Vec<RawClass> = Vec::new();
    let mut index: HashMap<(u64, CycleType), Vec<usize>> = HashMap::new();
    let mut sum = BigUint::zero();
    let mut queue: VecDeque<Permutation> = VecDeque::new();
    queue.push_back(group.identity());
    for gen in group.generators() {
        queue.push_back(gen.clone());
    }
    let mut processed: u64 = 0;

    while sum < target {
        let cand = match queue.pop_front() {
            Some(c) => c,
            None => rng.next_element(),
        };
        processed += 1;
        if processed > cfg.sampling_budget {
            return Err(Error::SamplingBudget {
                budget: cfg.sampling_budget,
                found: found.len(),
            });
        }
        match classify(group, &found, &index, &cand, cfg.threshold)? {
            Classified::Known => continue,
            Classified::New(pre) => {
                let class = match pre {
                    Some(c) => c,
                    None => class_size_by_enumeration(group, &cand, cfg.threshold)?,
                };
                let size = class.len();
                sum += BigUint::from(size);
                debug_assert!(sum <= target, "classes are disjoint");
                let order = cand.order()?;
                let cache = if size <= CACHE_LIMIT {
                    Some(class.elements.into_iter().collect())
                } else {
                    None
                };
                let key = (order, cand.cycle_type());
                index.entry(key).or_default().push(found.len());
                found.push(RawClass {
                    rep: cand.clone(),
                    order,
                    size: BigUint::from(size),
                    cache,
                });
                // powers of the new representative reach smaller classes
                // that random sampling would rarely hit
                let limit = order.min(128);
                for k in 2..limit {
                    queue.push_back(cand.pow(k as i64));
                }
                if order >= 128 {
                    for d in divisors(order) {
                        if d > 1 && d < order {
                            queue.push_back(cand.pow((order / d) as i64));
                        }
                    }
                }
            }
        }
    }
    assert_eq!(sum, target, "class sizes must sum to the group order");
    Ok(found)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            out.push(n / d);
        }
        d += 1;
    }
    out.sort_unstable();
    out.dedup();
    out
}

// ------------------------------------------------- natural S_n / A_n route

fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        let top = remaining.min(max_part);
        for part in (1..=top).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn partition_rep(parts: &[u32], degree: usize) -> Permutation {
    let mut images: Vec<u16> = (0..degree as u32).map(|i| i as u16).collect();
    let mut next = 0u32;
    for &p in parts {
        for k in 0..p {
            images[(next + k) as usize] = (next + (k + 1) % p) as u16;
        }
        next += p;
    }
    Permutation::from_images(images).expect("valid cycle layout")
}

/// Centralizer order of a cycle type in the full symmetric group:
/// `prod l^(m_l) * m_l!`.
fn symmetric_centralizer(parts: &[u32]) -> BigUint {
    let mut z = BigUint::one();
    let mut mult: HashMap<u32, usize> = HashMap::new();
    for &p in parts {
        *mult.entry(p).or_default() += 1;
    }
    for (l, m) in mult {
        for _ in 0..m {
            z *= BigUint::from(l);
        }
        z *= factorial(m);
    }
    z
}

fn natural_classes(group: &PermGroup, alternating: bool) -> Vec<RawClass> {
    let n = group.degree() as u32;
    let nfact = factorial(n as usize);
    let mut out = Vec::new();
    for parts in partitions(n) {
        let transpositions: u32 = parts.iter().map(|p| p - 1).sum();
        let even = transpositions % 2 == 0;
        if alternating && !even {
            continue;
        }
        let rep = partition_rep(&parts, group.degree());
        let order = rep.order().expect("partition order fits u64");
        let full_size = &nfact / symmetric_centralizer(&parts);
        if alternating {
            let splits = parts.iter().all(|p| p % 2 == 1)
                && parts.windows(2).all(|w| w[0] != w[1]);
            if splits {
                let half = &full_size / 2u32;
                // conjugate by a transposition inside the largest cycle to
                // land in the other half (split partitions of n >= 3 always
                // have a part >= 3)
                debug_assert!(parts[0] >= 3);
                let twin = {
                    let t = crate::perm::parse_perm("(1,2)", group.degree()).expect("valid");
                    rep.conjugate_by(&t)
                };
                out.push(RawClass {
                    rep: rep.clone(),
                    order,
                    size: half.clone(),
                    cache: None,
                });
                out.push(RawClass {
                    rep: twin,
                    order,
                    size: half,
                    cache: None,
                });
                continue;
            }
        }
        out.push(RawClass {
            rep,
            order,
            size: full_size,
            cache: None,
        });
    }
    out
}

// ----------------------------------------------------------- finishing up

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn letters(mut rank: usize) -> String {
    // A, B, ..., Z, AA, AB, ...
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (rank % 26) as u8);
        rank /= 26;
        if rank == 0 {
            break;
        }
        rank -= 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Sort classes by (element order, size, power fingerprint, discovery
/// order), assign names, and build the lookup index. The power fingerprint
/// only has to be computed inside (order, size) ties; classes that remain
/// tied after it keep their discovery order, so their letters may permute
/// relative to other conventions.
fn finish_table(group: Arc<PermGroup>, raw: Vec<RawClass>, threshold: u64) -> Result<ClassTable> {
    let g_order = group.order().clone();
    let total: BigUint = raw.iter().map(|c| c.size.clone()).sum();
    assert_eq!(total, g_order, "completeness certificate");

    // provisional table for fingerprint classification
    let mut order_of_idx: Vec<(u64, BigUint)> = raw
        .iter()
        .map(|c| (c.order, c.size.clone()))
        .collect();

    // fingerprints for tied (order, size) groups
    let mut tie_groups: HashMap<(u64, BigUint), Vec<usize>> = HashMap::new();
    for (i, c) in raw.iter().enumerate() {
        tie_groups
            .entry((c.order, c.size.clone()))
            .or_default()
            .push(i);
    }
    let mut fingerprints: Vec<Vec<(u64, u64, BigUint)>> = vec![Vec::new(); raw.len()];
    let needs_fp: Vec<usize> = tie_groups
        .values()
        .filter(|v| v.len() > 1)
        .flatten()
        .copied()
        .collect();
    if !needs_fp.is_empty() {
        // classify rep^p against the raw classes directly
        let classify_raw = |g: &Permutation| -> usize {
            let key = (g.order().expect("order"), g.cycle_type());
            let mut hits: Vec<usize> = Vec::new();
            for (i, c) in raw.iter().enumerate() {
                if c.order == key.0 && c.rep.cycle_type() == key.1 {
                    hits.push(i);
                }
            }
            if hits.len() == 1 {
                return hits[0];
            }
            for &i in &hits {
                if let Some(cache) = &raw[i].cache {
                    if cache.contains(g) {
                        return i;
                    }
                } else if are_conjugate_unchecked(&group, g, &raw[i].rep, threshold).is_some() {
                    return i;
                }
            }
            unreachable!("power of a member classifies")
        };
        for &i in &needs_fp {
            let mut fp = Vec::new();
            for p in prime_divisors(raw[i].order) {
                let t = classify_raw(&raw[i].rep.pow(p as i64));
                fp.push((p, order_of_idx[t].0, order_of_idx[t].1.clone()));
            }
            fingerprints[i] = fp;
        }
    }
    order_of_idx.clear();

    let mut perm_order: Vec<usize> = (0..raw.len()).collect();
    perm_order.sort_by(|&a, &b| {
        raw[a]
            .order
            .cmp(&raw[b].order)
            .then_with(|| raw[a].size.cmp(&raw[b].size))
            .then_with(|| fingerprints[a].cmp(&fingerprints[b]))
            .then_with(|| a.cmp(&b))
    });

    let mut classes = Vec::with_capacity(raw.len());
    let mut caches = Vec::with_capacity(raw.len());
    let mut invariant_index: HashMap<(u64, CycleType), Vec<usize>> = HashMap::new();
    let mut letter_rank: HashMap<u64, usize> = HashMap::new();
    for (new_idx, &old_idx) in perm_order.iter().enumerate() {
        let rank = letter_rank.entry(raw[old_idx].order).or_insert(0);
        let name = format!("{}{}", raw[old_idx].order, letters(*rank));
        *rank += 1;
        let centralizer_order = &g_order / &raw[old_idx].size;
        invariant_index
            .entry((raw[old_idx].order, raw[old_idx].rep.cycle_type()))
            .or_default()
            .push(new_idx);
        classes.push(ConjugacyClass {
            representative: raw[old_idx].rep.clone(),
            element_order: raw[old_idx].order,
            size: raw[old_idx].size.clone(),
            centralizer_order,
            name,
        });
        caches.push(raw[old_idx].cache.clone());
    }

    Ok(ClassTable {
        group,
        classes,
        caches,
        invariant_index,
        power_cache: Mutex::new(HashMap::new()),
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_perm;

    fn table(gens: &[&str], degree: usize, seed: u64) -> ClassTable {
        let gens = gens.iter().map(|s| parse_perm(s, degree).unwrap()).collect();
        let group = Arc::new(PermGroup::from_generators(gens, seed).unwrap());
        ClassTable::build(group, &ClassTableConfig::default()).unwrap()
    }

    #[test]
    fn s3_classes() {
        let t = table(&["(1,2)", "(1,2,3)"], 3, 0);
        assert_eq!(t.len(), 3);
        let sizes: Vec<u32> = t
            .classes()
            .iter()
            .map(|c| c.size.clone().try_into().unwrap())
            .collect();
        assert_eq!(sizes, vec![1, 3, 2]); // 1A, 2A, 3A
        assert_eq!(t.classes()[0].name, "1A");
        assert_eq!(t.classes()[1].name, "2A");
        assert_eq!(t.classes()[2].name, "3A");
    }

    #[test]
    fn s5_natural_route_matches_partitions() {
        let t = table(&["(1,2)", "(1,2,3,4,5)"], 5, 0);
        assert_eq!(t.len(), 7);
        let total: BigUint = t.classes().iter().map(|c| c.size.clone()).sum();
        assert_eq!(total, BigUint::from(120u32));
    }

    #[test]
    fn a4_splits_three_cycles() {
        let t = table(&["(1,2,3)", "(2,3,4)"], 4, 0);
        assert_eq!(t.len(), 4); // 1A, 2A, 3A, 3B
        let a = parse_perm("(1,2,3)", 4).unwrap();
        let b = parse_perm("(1,3,2)", 4).unwrap();
        assert_ne!(t.class_of(&a).unwrap(), t.class_of(&b).unwrap());
    }

    #[test]
    fn class_of_respects_conjugation() {
        let t = table(&["(1,2)", "(1,2,3,4,5)"], 5, 3);
        let mut rng = RandomSource::new(t.group(), 99);
        for c in 0..t.len() {
            let rep = t.classes()[c].representative.clone();
            for _ in 0..20 {
                let x = rng.next_element();
                assert_eq!(t.class_of(&rep.conjugate_by(&x)).unwrap(), c);
            }
        }
    }

    #[test]
    fn power_map_identities() {
        let t = table(&["(1,2)", "(1,2,3,4,5)"], 5, 0);
        let id_map = t.power_map(1);
        assert!((0..t.len()).all(|c| id_map[c] == c));
        // j = element order sends everything to the identity class
        for c in 0..t.len() {
            let ord = t.classes()[c].element_order as i64;
            assert_eq!(t.classes()[t.power_map(ord)[c]].element_order, 1);
        }
    }

    #[test]
    fn symmetric_groups_are_all_real() {
        for (gens, degree) in [(vec!["(1,2)", "(1,2,3,4,5,6)"], 6)] {
            let t = table(&gens, degree, 0);
            assert_eq!(t.real_classes().len(), t.len());
            assert!(t.quasi_real_classes().is_empty());
        }
    }

    #[test]
    fn structure_constant_s3() {
        // S(2A, 2A, 3A) in S3: pairs of transpositions (a, b) with a*b a
        // fixed 3-cycle; brute force over all 6 elements gives 3
        let t = table(&["(1,2)", "(1,2,3)"], 3, 0);
        let c2 = t.index_of_name("2A").unwrap();
        let c3 = t.index_of_name("3A").unwrap();
        assert_eq!(t.structure_constant(c2, c2, c3).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn structure_constant_sum_rule() {
        // each a in c1 pairs with exactly one b = a^-1 g, so summing over
        // the middle argument recovers |c1|
        let t = table(&["(1,2)", "(1,2,3,4)"], 4, 0);
        for c1 in 0..t.len() {
            for c3 in 0..t.len() {
                let total: BigUint = (0..t.len())
                    .map(|c2| t.structure_constant(c1, c2, c3).unwrap())
                    .sum();
                assert_eq!(total, t.classes()[c1].size, "c1={c1} c3={c3}");
            }
        }
    }

    #[test]
    fn dihedral_sampling_route() {
        let t = table(&["(1,2,3,4)", "(1,3)"], 4, 5);
        assert_eq!(t.len(), 5);
        let total: BigUint = t.classes().iter().map(|c| c.size.clone()).sum();
        assert_eq!(total, BigUint::from(8u32));
    }

    #[test]
    fn naming_deterministic_for_fixed_seed() {
        let make = || {
            let gens = vec![
                parse_perm("(1,2,3,4)", 4).unwrap(),
                parse_perm("(1,3)", 4).unwrap(),
            ];
            let group = Arc::new(PermGroup::from_generators(gens, 9).unwrap());
            let cfg = ClassTableConfig {
                seed: 42,
                ..Default::default()
            };
            ClassTable::build(group, &cfg).unwrap()
        };
        let a = make();
        let b = make();
        let names = |t: &ClassTable| {
            t.classes()
                .iter()
                .map(|c| (c.name.clone(), c.representative.clone()))
                .collect::<Vec<_>>()
        };
        assert_eq!(names(&a), names(&b));
    }
}
