use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex};

use super::Symbol;

/// Interned words. Equal symbol sequences share one allocation, so `Word`
/// equality and hashing work on the pointer.
static INTERNER: LazyLock<Mutex<HashSet<Arc<[Symbol]>>>> =
    LazyLock::new(|| Mutex::new(HashSet::new()));

fn intern(symbols: &[Symbol]) -> Arc<[Symbol]> {
    let mut table = INTERNER.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(existing) = table.get(symbols) {
        return existing.clone();
    }
    let arc: Arc<[Symbol]> = Arc::from(symbols);
    table.insert(arc.clone());
    arc
}

/// A monomial of the free monoid on symbols. The empty word is the unit.
#[derive(Clone)]
pub struct Word(Arc<[Symbol]>);

impl Word {
    pub fn new(symbols: &[Symbol]) -> Word {
        Word(intern(symbols))
    }

    pub fn unit() -> Word {
        Word::new(&[])
    }

    pub fn single(symbol: Symbol) -> Word {
        Word::new(&[symbol])
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_unit()
    }

    pub fn concat(&self, other: &Word) -> Word {
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        let mut buf = Vec::with_capacity(self.len() + other.len());
        buf.extend_from_slice(&self.0);
        buf.extend_from_slice(&other.0);
        Word::new(&buf)
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.0.contains(symbol)
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Word) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as *const Symbol as usize).hash(state);
    }
}

impl Ord for Word {
    /// Shorter words first, then lexicographic by `Symbol` order. This is the
    /// storage order only; printing uses a declared symbol order.
    fn cmp(&self, other: &Word) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
