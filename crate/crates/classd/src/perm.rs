//! Permutations on the points `1..=degree`.
//!
//! Composition is **left-to-right** throughout the crate: `(p * q)` means
//! "apply `p`, then `q`", so `(p * q).apply(x) == q.apply(p.apply(x))`.
//! This matches the convention of the computer-algebra logs this tool is
//! designed to reproduce; the literature is split on the choice, so it is
//! stated here once and relied on everywhere.
//!
//! Points are 1-based in all input and output (cycle notation, tuples,
//! group files) and 0-based internally. Degrees are capped at 65535 so
//! images fit in 16-bit storage.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported degree; images are stored as `u16`.
pub const MAX_DEGREE: usize = 65535;

/// A permutation of `{0, .., degree-1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Box<[u16]>,
}

impl Permutation {
    /// The identity on `degree` points.
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).map(|i| i as u16).collect(),
        }
    }

    /// Build from a 0-based image array, checking bijectivity.
    pub fn from_images(images: Vec<u16>) -> Result<Self> {
        let degree = images.len();
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree,
                max: MAX_DEGREE,
            });
        }
        let mut seen = vec![false; degree];
        for &img in &images {
            if (img as usize) >= degree {
                return Err(Error::PointOutOfRange {
                    point: img as u32 + 1,
                    degree,
                });
            }
            if seen[img as usize] {
                return Err(Error::RepeatedPoint {
                    point: img as u32 + 1,
                });
            }
            seen[img as usize] = true;
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, point: u16) -> u16 {
        self.images[point as usize]
    }

    /// The raw 0-based image slice.
    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Left-to-right product: apply `self`, then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    /// Like [`compose`](Self::compose) but fails on degree mismatch.
    pub fn compose_checked(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose(other))
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u16; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u16;
        }
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// The conjugate `x^-1 * self * x` (with left-to-right products).
    ///
    /// Computed without inverting `x`: the result maps `x(i) -> x(self(i))`.
    pub fn conjugate_by(&self, x: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), x.degree());
        let mut images = vec![0u16; self.degree()];
        for i in 0..self.degree() {
            images[x.images[i] as usize] = x.images[self.images[i] as usize];
        }
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// `self^exp` for any signed exponent, via cycle traversal.
    pub fn pow(&self, exp: i64) -> Permutation {
        let n = self.degree();
        let mut images = vec![0u16; n];
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            // collect the cycle through `start`
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p] as usize;
            }
            let len = cycle.len() as i64;
            let shift = exp.rem_euclid(len) as usize;
            for (k, &pt) in cycle.iter().enumerate() {
                images[pt] = cycle[(k + shift) % cycle.len()] as u16;
            }
        }
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// Multiplicative order (lcm of cycle lengths).
    pub fn order(&self) -> Result<u64> {
        let mut ord: u64 = 1;
        for (len, _) in self.cycle_type().parts() {
            let len = *len as u64;
            let g = num_integer::gcd(ord, len);
            ord = ord
                .checked_div(g)
                .and_then(|o| o.checked_mul(len))
                .ok_or(Error::OrderOverflow)?;
        }
        Ok(ord)
    }

    /// Cycle lengths with multiplicities, fixed points included.
    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut count_by_len = vec![0u32; n + 1];
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u32;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                len += 1;
                p = self.images[p] as usize;
            }
            count_by_len[len as usize] += 1;
        }
        let parts = (1..=n)
            .rev()
            .filter(|&l| count_by_len[l] > 0)
            .map(|l| (l as u32, count_by_len[l]))
            .collect();
        CycleType { parts }
    }

    /// Disjoint cycles on 1-based points, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32 + 1);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Smallest moved 0-based point, if any.
    pub fn min_moved(&self) -> Option<u16> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i != x as usize)
            .map(|(i, _)| i as u16)
    }

    /// True if the permutation is even (product of an even number of
    /// transpositions).
    pub fn is_even(&self) -> bool {
        let mut transpositions = 0usize;
        for (len, count) in self.cycle_type().parts() {
            transpositions += (*len as usize - 1) * *count as usize;
        }
        transpositions % 2 == 0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, pt) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{pt}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{self}]")
    }
}

/// Multiset of cycle lengths, stored as `(length, multiplicity)` pairs in
/// decreasing length order. A cheap conjugacy invariant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycleType {
    parts: Vec<(u32, u32)>,
}

impl CycleType {
    pub fn parts(&self) -> std::slice::Iter<'_, (u32, u32)> {
        self.parts.iter()
    }

    /// Expanded multiset, largest part first: `(3,2,1)` style.
    pub fn expanded(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for &(len, count) in &self.parts {
            for _ in 0..count {
                out.push(len);
            }
        }
        out
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(len, count) in &self.parts {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if count == 1 {
                write!(f, "{len}")?;
            } else {
                write!(f, "{len}^{count}")?;
            }
        }
        Ok(())
    }
}

/// Parse disjoint-cycle notation like `"(1,2,3)(4,5)"` (or `"()"` for the
/// identity) into a permutation of the given degree. Whitespace between
/// tokens is ignored; points may also be separated by spaces.
pub fn parse_perm(text: &str, degree: usize) -> Result<Permutation> {
    if degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree,
            max: MAX_DEGREE,
        });
    }
    let bytes = text.as_bytes();
    let mut images: Vec<u16> = (0..degree as u32).map(|i| i as u16).collect();
    let mut used = vec![false; degree];
    let mut pos = 0usize;
    let mut saw_cycle = false;

    let err = |at: usize, reason: &str| Error::BadCycleNotation {
        at,
        reason: reason.to_string(),
    };

    while pos < bytes.len() {
        match bytes[pos] {
            b' ' | b'\t' => pos += 1,
            b'(' => {
                saw_cycle = true;
                pos += 1;
                let mut cycle: Vec<u32> = Vec::new();
                loop {
                    while pos < bytes.len() && (bytes[pos] == b' ' || bytes[pos] == b'\t') {
                        pos += 1;
                    }
                    if pos >= bytes.len() {
                        return Err(err(pos, "unbalanced parenthesis"));
                    }
                    match bytes[pos] {
                        b')' => {
                            pos += 1;
                            break;
                        }
                        b',' => {
                            if cycle.is_empty() {
                                return Err(err(pos, "comma before first point"));
                            }
                            pos += 1;
                        }
                        b'0'..=b'9' => {
                            let start = pos;
                            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                                pos += 1;
                            }
                            let point: u32 = text[start..pos]
                                .parse()
                                .map_err(|_| err(start, "number too large"))?;
                            if point == 0 || point as usize > degree {
                                return Err(Error::PointOutOfRange { point, degree });
                            }
                            if used[(point - 1) as usize] {
                                return Err(Error::RepeatedPoint { point });
                            }
                            used[(point - 1) as usize] = true;
                            cycle.push(point);
                        }
                        other => {
                            return Err(err(pos, &format!("unexpected byte {:?}", other as char)))
                        }
                    }
                }
                if cycle.len() == 1 {
                    // a 1-cycle is the identity on that point; allow it
                    continue;
                }
                for (i, &a) in cycle.iter().enumerate() {
                    let b = cycle[(i + 1) % cycle.len()];
                    images[(a - 1) as usize] = (b - 1) as u16;
                }
            }
            other => return Err(err(pos, &format!("unexpected byte {:?}", other as char))),
        }
    }
    if !saw_cycle {
        return Err(err(0, "expected at least one cycle or ()"));
    }
    Permutation::from_images(images)
}

/// Parse a whitespace- or comma-separated 1-based image list.
pub fn parse_image_list(text: &str, degree: usize) -> Result<Permutation> {
    let mut images = Vec::with_capacity(degree);
    for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
        if tok.is_empty() {
            continue;
        }
        let point: u32 = tok.parse().map_err(|_| Error::BadCycleNotation {
            at: 0,
            reason: format!("bad image value {tok:?}"),
        })?;
        if point == 0 || point as usize > degree {
            return Err(Error::PointOutOfRange { point, degree });
        }
        images.push((point - 1) as u16);
    }
    if images.len() != degree {
        return Err(Error::BadCycleNotation {
            at: 0,
            reason: format!("expected {degree} images, got {}", images.len()),
        });
    }
    Permutation::from_images(images)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic() {
        let p = parse_perm("(1,2,3)(4,5)", 5).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        let id = parse_perm("()", 4).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_perm("(1,2", 3),
            Err(Error::BadCycleNotation { .. })
        ));
        assert!(matches!(
            parse_perm("(1,2)(2,3)", 3),
            Err(Error::RepeatedPoint { point: 2 })
        ));
        assert!(matches!(
            parse_perm("(1,7)", 3),
            Err(Error::PointOutOfRange { point: 7, .. })
        ));
    }

    #[test]
    fn compose_left_to_right() {
        // (1,2) * (2,3) applies (1,2) first: 1->2->3, so the product is (1,3,2)
        let a = parse_perm("(1,2)", 3).unwrap();
        let b = parse_perm("(2,3)", 3).unwrap();
        let ab = a.compose(&b);
        assert_eq!(ab, parse_perm("(1,3,2)", 3).unwrap());
        let ba = b.compose(&a);
        assert_eq!(ba, parse_perm("(1,2,3)", 3).unwrap());
    }

    #[test]
    fn involution_squares_to_identity() {
        let a = parse_perm("(1,2)", 3).unwrap();
        assert!(a.compose(&a).is_identity());
    }

    #[test]
    fn inverse_and_pow() {
        let p = parse_perm("(1,2,3,4,5)", 5).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(p.pow(5), Permutation::identity(5));
        assert_eq!(p.pow(7), p.pow(2));
        assert_eq!(p.order().unwrap(), 5);
    }

    #[test]
    fn conjugate_matches_products() {
        let p = parse_perm("(1,2,3)", 6).unwrap();
        let x = parse_perm("(1,4)(2,5)(3,6)", 6).unwrap();
        let direct = x.inverse().compose(&p).compose(&x);
        assert_eq!(p.conjugate_by(&x), direct);
        assert_eq!(p.conjugate_by(&x), parse_perm("(4,5,6)", 6).unwrap());
    }

    #[test]
    fn cycle_type_parts() {
        let p = parse_perm("(1,2,3)(4,5)", 6).unwrap();
        assert_eq!(p.cycle_type().expanded(), vec![3, 2, 1]);
        let id = Permutation::identity(4);
        assert_eq!(id.cycle_type().expanded(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn display_roundtrip() {
        let p = parse_perm("(1,2,3)(4,5)", 7).unwrap();
        assert_eq!(parse_perm(&p.to_string(), 7).unwrap(), p);
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }
}
