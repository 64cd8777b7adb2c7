//! Role-tagged vertex identities.
//!
//! Every vertex of the constructed families carries the name it has in the
//! construction: `u_i`, `v_i`, `x_{i,j}`, a merge of several of those, or one
//! half of a split vertex. Identities survive graph surgery, so a statement like
//! "merge `v_1` and `v_11`" is expressible directly and every transform is
//! auditable from the ids alone.
//!
//! Canonical string forms: `u3`, `v12`, `x2.7`, `m(v1|v11)`, `y(m(x1.1|x6.1))`,
//! `z(x1.1)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Which half of a split vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Half {
    Y,
    Z,
}

/// Canonical vertex identity.
///
/// Equality and ordering are structural on the canonical form, which is why
/// [`VertexId::merged`] flattens and sorts its parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexId {
    U(u32),
    V(u32),
    X(u32, u32),
    Split(Arc<VertexId>, Half),
    Merged(Arc<[VertexId]>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VertexIdError {
    #[error("vertex index must be >= 1 in {0:?}")]
    ZeroIndex(String),
    #[error("merged vertex needs at least one part")]
    EmptyMerge,
    #[error("merged parts are not pairwise distinct: {0}")]
    DuplicatePart(String),
    #[error("cannot parse vertex id {0:?}")]
    Parse(String),
}

impl VertexId {
    pub fn u(i: u32) -> Self {
        assert!(i >= 1, "u index must be >= 1");
        VertexId::U(i)
    }

    pub fn v(i: u32) -> Self {
        assert!(i >= 1, "v index must be >= 1");
        VertexId::V(i)
    }

    pub fn x(i: u32, j: u32) -> Self {
        assert!(i >= 1 && j >= 1, "x indices must be >= 1");
        VertexId::X(i, j)
    }

    pub fn split(of: VertexId, half: Half) -> Self {
        VertexId::Split(Arc::new(of), half)
    }

    /// Canonical merge of `parts`.
    ///
    /// Nested merges are flattened. A pair `y(a)`, `z(a)` among the parts
    /// collapses back to `a`, so merging the two halves of a split vertex
    /// restores the original identity. A single remaining part is returned
    /// as itself.
    pub fn merged<I: IntoIterator<Item = VertexId>>(parts: I) -> Result<Self, VertexIdError> {
        let mut flat = Vec::new();
        for p in parts {
            flatten_into(p, &mut flat);
        }
        if flat.is_empty() {
            return Err(VertexIdError::EmptyMerge);
        }
        flat.sort();
        for w in flat.windows(2) {
            if w[0] == w[1] {
                return Err(VertexIdError::DuplicatePart(w[0].to_string()));
            }
        }
        // Rejoin split halves until nothing changes.
        loop {
            let mut joined = None;
            'scan: for (a, p) in flat.iter().enumerate() {
                if let VertexId::Split(base, Half::Y) = p {
                    for (b, q) in flat.iter().enumerate() {
                        if let VertexId::Split(other, Half::Z) = q {
                            if base == other {
                                joined = Some((a, b, (**base).clone()));
                                break 'scan;
                            }
                        }
                    }
                }
            }
            let Some((a, b, base)) = joined else { break };
            let (hi, lo) = if a > b { (a, b) } else { (b, a) };
            flat.remove(hi);
            flat.remove(lo);
            flatten_into(base, &mut flat);
            flat.sort();
        }
        if flat.len() == 1 {
            return Ok(flat.pop().unwrap());
        }
        Ok(VertexId::Merged(flat.into()))
    }

    /// Constituent ids of a merged vertex; a non-merged vertex is its own
    /// single part.
    pub fn parts(&self) -> Vec<VertexId> {
        match self {
            VertexId::Merged(ps) => ps.to_vec(),
            other => vec![other.clone()],
        }
    }

    pub fn is_merged(&self) -> bool {
        matches!(self, VertexId::Merged(_))
    }

    /// Role letter used for DOT shapes: `u`, `v`, `x`, `s` (split), `m`.
    pub fn role(&self) -> char {
        match self {
            VertexId::U(_) => 'u',
            VertexId::V(_) => 'v',
            VertexId::X(..) => 'x',
            VertexId::Split(..) => 's',
            VertexId::Merged(_) => 'm',
        }
    }

    /// Role of the original vertices behind this id (`u`, `v` or `x`), seen
    /// through merges and splits; `None` for a merge of mixed roles.
    pub fn base_role(&self) -> Option<char> {
        match self {
            VertexId::U(_) => Some('u'),
            VertexId::V(_) => Some('v'),
            VertexId::X(..) => Some('x'),
            VertexId::Split(of, _) => of.base_role(),
            VertexId::Merged(ps) => {
                let r = ps.first()?.base_role()?;
                ps.iter().all(|p| p.base_role() == Some(r)).then_some(r)
            }
        }
    }

    /// Largest copy index `i` occurring anywhere in the id.
    pub fn max_index(&self) -> u32 {
        match self {
            VertexId::U(i) | VertexId::V(i) | VertexId::X(i, _) => *i,
            VertexId::Split(of, _) => of.max_index(),
            VertexId::Merged(ps) => ps.iter().map(VertexId::max_index).max().unwrap_or(0),
        }
    }

    /// Shift every copy index by `offset` (used when taking disjoint unions).
    pub fn shifted(&self, offset: u32) -> VertexId {
        match self {
            VertexId::U(i) => VertexId::U(i + offset),
            VertexId::V(i) => VertexId::V(i + offset),
            VertexId::X(i, j) => VertexId::X(i + offset, *j),
            VertexId::Split(of, h) => VertexId::Split(Arc::new(of.shifted(offset)), *h),
            VertexId::Merged(ps) => {
                VertexId::Merged(ps.iter().map(|p| p.shifted(offset)).collect())
            }
        }
    }
}

fn flatten_into(p: VertexId, out: &mut Vec<VertexId>) {
    match p {
        VertexId::Merged(ps) => out.extend(ps.iter().cloned()),
        other => out.push(other),
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::U(i) => write!(f, "u{i}"),
            VertexId::V(i) => write!(f, "v{i}"),
            VertexId::X(i, j) => write!(f, "x{i}.{j}"),
            VertexId::Split(of, Half::Y) => write!(f, "y({of})"),
            VertexId::Split(of, Half::Z) => write!(f, "z({of})"),
            VertexId::Merged(ps) => {
                f.write_str("m(")?;
                for (idx, p) in ps.iter().enumerate() {
                    if idx > 0 {
                        f.write_str("|")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for VertexId {
    type Err = VertexIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let id = p.vertex()?;
        if p.pos != s.len() {
            return Err(VertexIdError::Parse(s.to_string()));
        }
        Ok(id)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self) -> VertexIdError {
        VertexIdError::Parse(self.src.to_string())
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), VertexIdError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err())
        }
    }

    fn number(&mut self) -> Result<u32, VertexIdError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        let n: u32 = self.src[start..self.pos].parse().map_err(|_| self.err())?;
        if n == 0 {
            return Err(VertexIdError::ZeroIndex(self.src.to_string()));
        }
        Ok(n)
    }

    fn vertex(&mut self) -> Result<VertexId, VertexIdError> {
        let tag = self.peek().ok_or_else(|| self.err())?;
        self.pos += 1;
        match tag {
            b'u' => Ok(VertexId::U(self.number()?)),
            b'v' => Ok(VertexId::V(self.number()?)),
            b'x' => {
                let i = self.number()?;
                self.expect(b'.')?;
                Ok(VertexId::X(i, self.number()?))
            }
            b'y' | b'z' => {
                self.expect(b'(')?;
                let of = self.vertex()?;
                self.expect(b')')?;
                let half = if tag == b'y' { Half::Y } else { Half::Z };
                Ok(VertexId::split(of, half))
            }
            b'm' => {
                self.expect(b'(')?;
                let mut parts = vec![self.vertex()?];
                while self.peek() == Some(b'|') {
                    self.pos += 1;
                    parts.push(self.vertex()?);
                }
                self.expect(b')')?;
                VertexId::merged(parts)
            }
            _ => Err(self.err()),
        }
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_forms() {
        assert_eq!(VertexId::u(3).to_string(), "u3");
        assert_eq!(VertexId::v(12).to_string(), "v12");
        assert_eq!(VertexId::x(2, 7).to_string(), "x2.7");
        let m = VertexId::merged([VertexId::v(11), VertexId::v(1)]).unwrap();
        assert_eq!(m.to_string(), "m(v1|v11)");
    }

    #[test]
    fn merge_flattens_and_sorts() {
        let inner = VertexId::merged([VertexId::x(2, 1), VertexId::x(1, 1)]).unwrap();
        let outer = VertexId::merged([VertexId::x(3, 1), inner]).unwrap();
        let direct =
            VertexId::merged([VertexId::x(1, 1), VertexId::x(2, 1), VertexId::x(3, 1)]).unwrap();
        assert_eq!(outer, direct);
    }

    #[test]
    fn merge_single_part_is_identity() {
        assert_eq!(VertexId::merged([VertexId::u(4)]).unwrap(), VertexId::u(4));
    }

    #[test]
    fn merge_rejects_duplicates_and_empty() {
        assert!(matches!(
            VertexId::merged([VertexId::u(1), VertexId::u(1)]),
            Err(VertexIdError::DuplicatePart(_))
        ));
        assert_eq!(VertexId::merged([]), Err(VertexIdError::EmptyMerge));
    }

    #[test]
    fn split_halves_rejoin() {
        let x = VertexId::merged([VertexId::x(1, 1), VertexId::x(6, 1)]).unwrap();
        let y = VertexId::split(x.clone(), Half::Y);
        let z = VertexId::split(x.clone(), Half::Z);
        assert_eq!(VertexId::merged([z, y]).unwrap(), x);
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in [
            "", "w1", "u0", "x1", "x1.", "m(u1", "m(u1|u1)", "u1 ", "y(u1",
        ] {
            assert!(bad.parse::<VertexId>().is_err(), "{bad:?} parsed");
        }
    }

    fn arb_vertex() -> impl Strategy<Value = VertexId> {
        let leaf = prop_oneof![
            (1u32..20).prop_map(VertexId::U),
            (1u32..20).prop_map(VertexId::V),
            (1u32..20, 1u32..9).prop_map(|(i, j)| VertexId::X(i, j)),
        ];
        leaf.prop_recursive(3, 12, 4, |inner| {
            prop_oneof![
                (inner.clone(), any::<bool>())
                    .prop_map(|(v, y)| VertexId::split(v, if y { Half::Y } else { Half::Z })),
                proptest::collection::btree_set(inner, 2..4)
                    .prop_filter_map("merge", |ps| VertexId::merged(ps).ok()),
            ]
        })
    }

    proptest! {
        #[test]
        fn string_form_roundtrips(v in arb_vertex()) {
            let s = v.to_string();
            let back: VertexId = s.parse().unwrap();
            prop_assert_eq!(back, v);
        }
    }
}
