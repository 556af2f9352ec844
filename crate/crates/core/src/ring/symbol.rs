use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use super::RingError;

/// Next uid handed out by [`Symbol::fresh`]. Every schematic symbol that is
/// constructed with an explicit uid pushes this past that uid, so fresh
/// symbols never collide with ones read from files.
static NEXT_UID: AtomicU64 = AtomicU64::new(0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    /// A generator of the ring, identified by name.
    Base,
    /// A fresh indeterminate standing for an arbitrary ring element,
    /// identified by its uid alone.
    Schematic(u64),
}

/// An indeterminate of the free ring.
#[derive(Clone)]
pub struct Symbol {
    name: Arc<str>,
    kind: SymbolKind,
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Symbol {
    pub fn base(name: &str) -> Result<Symbol, RingError> {
        if !is_identifier(name) {
            return Err(RingError::BadSymbolName(name.to_string()));
        }
        Ok(Symbol { name: name.into(), kind: SymbolKind::Base })
    }

    /// Schematic symbol with a given uid, e.g. one read back from a certificate.
    pub fn schematic(name: &str, uid: u64) -> Result<Symbol, RingError> {
        if !is_identifier(name) {
            return Err(RingError::BadSymbolName(name.to_string()));
        }
        NEXT_UID.fetch_max(uid.saturating_add(1), AtomicOrdering::Relaxed);
        Ok(Symbol { name: name.into(), kind: SymbolKind::Schematic(uid) })
    }

    /// A schematic symbol whose uid has never been handed out in this process.
    pub fn fresh(name: &str) -> Symbol {
        debug_assert!(is_identifier(name));
        let uid = NEXT_UID.fetch_add(1, AtomicOrdering::Relaxed);
        Symbol { name: name.into(), kind: SymbolKind::Schematic(uid) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_schematic(&self) -> bool {
        matches!(self.kind, SymbolKind::Schematic(_))
    }

    pub fn uid(&self) -> Option<u64> {
        match self.kind {
            SymbolKind::Base => None,
            SymbolKind::Schematic(uid) => Some(uid),
        }
    }

    /// Parse the token form produced by `Display`: `name` or `name#uid`.
    pub fn from_token(token: &str) -> Result<Symbol, RingError> {
        match token.split_once('#') {
            None => Symbol::base(token),
            Some((name, uid)) => {
                let uid = uid
                    .parse::<u64>()
                    .ok()
                    .filter(|_| uid.bytes().all(|b| b.is_ascii_digit()))
                    .ok_or_else(|| RingError::BadSymbolName(token.to_string()))?;
                Symbol::schematic(name, uid)
            }
        }
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Symbol) -> bool {
        match (self.kind, other.kind) {
            (SymbolKind::Base, SymbolKind::Base) => self.name == other.name,
            (SymbolKind::Schematic(a), SymbolKind::Schematic(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self.kind {
            SymbolKind::Base => {
                0u8.hash(state);
                self.name.hash(state);
            }
            SymbolKind::Schematic(uid) => {
                1u8.hash(state);
                uid.hash(state);
            }
        }
    }
}

impl Ord for Symbol {
    /// Base symbols by name, then schematic symbols by uid.
    fn cmp(&self, other: &Symbol) -> Ordering {
        match (self.kind, other.kind) {
            (SymbolKind::Base, SymbolKind::Base) => self.name.cmp(&other.name),
            (SymbolKind::Base, SymbolKind::Schematic(_)) => Ordering::Less,
            (SymbolKind::Schematic(_), SymbolKind::Base) => Ordering::Greater,
            (SymbolKind::Schematic(a), SymbolKind::Schematic(b)) => a.cmp(&b),
        }
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Symbol) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Base => f.write_str(&self.name),
            SymbolKind::Schematic(uid) => write!(f, "{}#{}", self.name, uid),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifiers() {
        assert!(is_identifier("x"));
        assert!(is_identifier("x_1"));
        assert!(is_identifier("Abc9"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("1x"));
        assert!(!is_identifier("_x"));
        assert!(!is_identifier("x-y"));
    }

    #[test]
    fn schematic_equality_is_by_uid() {
        let a = Symbol::schematic("t", 7).unwrap();
        let b = Symbol::schematic("z", 7).unwrap();
        let c = Symbol::schematic("t", 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(Symbol::base("t").unwrap(), a);
    }

    #[test]
    fn fresh_never_reuses_seen_uids() {
        let seen = Symbol::schematic("t", 1_000_000).unwrap();
        let fresh = Symbol::fresh("t");
        assert!(fresh.uid().unwrap() > seen.uid().unwrap());
        assert_ne!(Symbol::fresh("t"), fresh);
    }

    #[test]
    fn token_round_trip() {
        for tok in ["x", "y_2", "t#0", "zeta#42"] {
            assert_eq!(Symbol::from_token(tok).unwrap().to_string(), tok);
        }
        assert!(Symbol::from_token("t#").is_err());
        assert!(Symbol::from_token("t#-1").is_err());
        assert!(Symbol::from_token("#3").is_err());
    }
}
