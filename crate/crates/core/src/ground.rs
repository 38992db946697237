use std::fmt;

use crate::error::{Error, Result};

/// Atom labels are indexed into a `u64` bitmask, which caps a ground set at 64
/// atoms. The enumeration guards bite long before that.
pub const MAX_ATOMS: usize = 64;

/// An ordered finite set of distinct atom labels.
///
/// The input order of the labels is the total order used for every canonical
/// form in the library, so identical input yields byte-identical output.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    elements: Vec<String>,
}

impl GroundSet {
    pub fn new<I, S>(elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.len() > MAX_ATOMS {
            return Err(Error::Input(format!(
                "ground set has {} atoms, maximum is {MAX_ATOMS}",
                elements.len()
            )));
        }
        for (i, a) in elements.iter().enumerate() {
            if elements[..i].contains(a) {
                return Err(Error::Input(format!("duplicate atom {a:?} in ground set")));
            }
        }
        Ok(GroundSet { elements })
    }

    /// Ground set with atoms `"0"`, `"1"`, ..., `"n-1"`.
    pub fn numbered(n: usize) -> Result<Self> {
        GroundSet::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn atom(&self, index: usize) -> &str {
        &self.elements[index]
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.elements.iter().map(String::as_str)
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.elements.iter().position(|a| a == atom)
    }

    /// Bitmask with one bit set per atom.
    pub fn full_mask(&self) -> u64 {
        if self.elements.is_empty() {
            0
        } else {
            u64::MAX >> (64 - self.elements.len())
        }
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elements.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        let err = GroundSet::new(["a", "b", "a"]).unwrap_err();
        assert!(err.to_string().contains("\"a\""));
    }

    #[test]
    fn full_mask_matches_len() {
        let g = GroundSet::numbered(5).unwrap();
        assert_eq!(g.full_mask(), 0b11111);
        assert_eq!(GroundSet::numbered(0).unwrap().full_mask(), 0);
    }

    #[test]
    fn index_lookup() {
        let g = GroundSet::new(["x", "y"]).unwrap();
        assert_eq!(g.index_of("y"), Some(1));
        assert_eq!(g.index_of("z"), None);
    }
}
