//! Bases for permutation groups and the tuple codec built on them.
//!
//! A base is a point sequence fixed only by the identity, so a group
//! element is pinned down by the images of the base points. Encoding a
//! permutation as its base-image tuple shrinks witness logs from `degree`
//! to `|base|` integers; decoding walks the stabilizer chain instead of
//! running a generic representative-action search.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// An ordered list of (0-based) base points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Base {
    pub points: Vec<u16>,
}

/// Images of the base points under some group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedElement {
    pub images: Vec<u16>,
}

/// The base of the group's own stabilizer chain. Valid by construction,
/// not guaranteed minimal.
pub fn base_of(group: &PermGroup) -> Base {
    Base {
        points: group.base(),
    }
}

/// Whether the iterated pointwise stabilizer of `points` is trivial,
/// decided by rebuilding the chain with the points forced as a base prefix.
pub fn is_base(group: &PermGroup, points: &[u16]) -> Result<bool> {
    for &p in points {
        if p as usize >= group.degree() {
            return Err(Error::PointOutOfRange {
                point: p as u32 + 1,
                degree: group.degree(),
            });
        }
    }
    let mut prefix = Vec::new();
    for &p in points {
        if !prefix.contains(&p) {
            prefix.push(p);
        }
    }
    let rebased =
        PermGroup::from_generators_with_base(group.generators().to_vec(), &prefix, 0)?;
    // the chain holds exactly |prefix| forced levels; any level beyond them
    // witnesses a non-identity element fixing all the given points
    Ok(rebased.levels().len() <= prefix.len())
}

/// The base-image tuple of `g`, which must be a member of the group.
pub fn encode(group: &PermGroup, base: &Base, g: &Permutation) -> Result<EncodedElement> {
    if !group.contains(g)? {
        return Err(Error::NotInGroup);
    }
    Ok(EncodedElement {
        images: base.points.iter().map(|&b| g.apply(b)).collect(),
    })
}

/// The unique group element sending each base point to the recorded image.
///
/// Requires the codec base to be the group's chain base; when it is not,
/// the group is rebased first (a chain rebuild on the prescribed prefix).
pub fn decode(group: &PermGroup, base: &Base, encoded: &EncodedElement) -> Result<Permutation> {
    if encoded.images.len() != base.points.len() {
        return Err(Error::BadTupleLength {
            got: encoded.images.len(),
            want: base.points.len(),
        });
    }
    for &p in &encoded.images {
        if p as usize >= group.degree() {
            return Err(Error::PointOutOfRange {
                point: p as u32 + 1,
                degree: group.degree(),
            });
        }
    }
    let chain_base = group.base();
    let rebased_storage;
    let chain_group = if chain_base.len() >= base.points.len()
        && chain_base[..base.points.len()] == base.points[..]
    {
        group
    } else {
        rebased_storage =
            PermGroup::from_generators_with_base(group.generators().to_vec(), &base.points, 0)?;
        &rebased_storage
    };
    // with the base as chain prefix, levels beyond it must be trivial:
    // otherwise the tuple cannot pin a unique element
    if chain_group.levels().len() > base.points.len() {
        return Err(Error::NotABase);
    }

    let mut targets = encoded.images.clone();
    let mut acc = Permutation::identity(group.degree());
    for (i, level) in chain_group.levels().iter().enumerate() {
        debug_assert_eq!(level.base_point, base.points[i]);
        let delta = targets[i];
        let (t, tinv) = match (
            level.transversal_for(delta),
            level.transversal_inv_for(delta),
        ) {
            (Some(t), Some(tinv)) => (t, tinv),
            _ => {
                return Err(Error::TupleNotRealized {
                    base_point: level.base_point as u32 + 1,
                })
            }
        };
        for target in targets.iter_mut().skip(i + 1) {
            *target = tinv.apply(*target);
        }
        acc = t.compose(&acc);
    }
    for (i, &b) in base.points.iter().enumerate() {
        if acc.apply(b) != encoded.images[i] {
            return Err(Error::TupleNotRealized {
                base_point: b as u32 + 1,
            });
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_perm;
    use crate::rng::RandomSource;

    fn s4() -> PermGroup {
        PermGroup::from_generators(
            vec![
                parse_perm("(1,2)", 4).unwrap(),
                parse_perm("(1,2,3,4)", 4).unwrap(),
            ],
            0,
        )
        .unwrap()
    }

    #[test]
    fn chain_base_is_a_base() {
        let g = s4();
        let base = base_of(&g);
        assert!(is_base(&g, &base.points).unwrap());
        assert_eq!(base.points.len(), 3); // point stabilizer chain of S4
    }

    #[test]
    fn two_points_do_not_base_s4() {
        let g = s4();
        assert!(is_base(&g, &[0, 1, 2]).unwrap());
        assert!(!is_base(&g, &[0, 1]).unwrap()); // (3,4) fixes both
    }

    #[test]
    fn superset_of_base_is_base() {
        let g = s4();
        let mut points = base_of(&g).points;
        points.push(3);
        assert!(is_base(&g, &points).unwrap());
    }

    #[test]
    fn trivial_group_empty_base() {
        let g = PermGroup::from_generators(vec![Permutation::identity(5)], 0).unwrap();
        assert!(base_of(&g).points.is_empty());
        assert!(is_base(&g, &[]).unwrap());
    }

    #[test]
    fn encode_identity_gives_base() {
        let g = s4();
        let base = base_of(&g);
        let e = encode(&g, &base, &Permutation::identity(4)).unwrap();
        assert_eq!(e.images, base.points);
        assert_eq!(
            decode(&g, &base, &e).unwrap(),
            Permutation::identity(4)
        );
    }

    #[test]
    fn roundtrip_exhaustive_s4() {
        let g = s4();
        let base = base_of(&g);
        for elem in g.elements_capped(24).unwrap() {
            let e = encode(&g, &base, &elem).unwrap();
            assert_eq!(e.images.len(), base.points.len());
            assert_eq!(decode(&g, &base, &e).unwrap(), elem);
        }
    }

    #[test]
    fn injectivity_of_encodings() {
        let g = s4();
        let base = base_of(&g);
        let mut seen = std::collections::HashSet::new();
        for elem in g.elements_capped(24).unwrap() {
            assert!(seen.insert(encode(&g, &base, &elem).unwrap().images));
        }
    }

    #[test]
    fn repeated_image_rejected() {
        let g = s4();
        let base = base_of(&g);
        let e = EncodedElement {
            images: vec![2, 2, 2],
        };
        assert!(matches!(
            decode(&g, &base, &e),
            Err(Error::TupleNotRealized { .. })
        ));
    }

    #[test]
    fn foreign_base_triggers_rebase() {
        let g = s4();
        let base = Base {
            points: vec![3, 2, 1],
        };
        let mut rng = RandomSource::new(&g, 4);
        for _ in 0..50 {
            let elem = rng.next_element();
            let e = encode(&g, &base, &elem).unwrap();
            assert_eq!(decode(&g, &base, &e).unwrap(), elem);
        }
    }

    #[test]
    fn non_member_rejected_by_encode() {
        let a4 = PermGroup::from_generators(
            vec![
                parse_perm("(1,2,3)", 4).unwrap(),
                parse_perm("(2,3,4)", 4).unwrap(),
            ],
            0,
        )
        .unwrap();
        let base = base_of(&a4);
        assert!(matches!(
            encode(&a4, &base, &parse_perm("(1,2)", 4).unwrap()),
            Err(Error::NotInGroup)
        ));
    }
}
