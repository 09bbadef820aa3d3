//! Process-wide symbol interner.
//!
//! Every generator of the function field (coordinates, named constants,
//! abstract functions and their partial derivatives, exponential atoms) is
//! interned once and referred to by a [`Sym`] handle. Handles are ordered by
//! interning order, which is only used for internal term storage; anything
//! observable (printing, sign normalization) goes through [`Sym::cmp_key`].

use std::cmp::Ordering;
use std::fmt;
use std::sync::LazyLock;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(u32);

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.data().display_name(), self.0)
    }
}

/// Data attached to an interned symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolData {
    Coord {
        name: String,
    },
    Const {
        name: String,
    },
    /// Abstract function `name(deps...)` differentiated by `multi`.
    Func {
        name: String,
        /// Chart index (1-based) and coordinate symbol of every argument.
        deps: Vec<(u8, Sym)>,
        /// Sorted multiset of chart indices.
        multi: Vec<u8>,
    },
    /// `exp(m)` for a coordinate monomial `m` (coefficient one). The empty
    /// monomial denotes `exp(1)`.
    ExpAtom {
        arg: Vec<(Sym, u32)>,
    },
}

impl SymbolData {
    fn rank(&self) -> u8 {
        match self {
            SymbolData::Coord { .. } => 0,
            SymbolData::Const { .. } => 1,
            SymbolData::Func { .. } => 2,
            SymbolData::ExpAtom { .. } => 3,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            SymbolData::Coord { name } | SymbolData::Const { name } | SymbolData::Func { name, .. } => {
                name
            }
            SymbolData::ExpAtom { .. } => "exp",
        }
    }

    /// Human readable name used in diagnostics, e.g. `w_xy`.
    pub fn display_name(&self) -> String {
        match self {
            SymbolData::Func { name, deps, multi } if !multi.is_empty() => {
                let mut s = format!("{name}_");
                // letters are only unambiguous for one-character coordinate names
                let letters = deps.iter().all(|(_, c)| c.data().name().chars().count() == 1);
                for i in multi {
                    let c = deps.iter().find(|(j, _)| j == i).map(|(_, c)| *c);
                    match c {
                        Some(c) if letters => s.push_str(c.data().name()),
                        _ => s.push_str(&i.to_string()),
                    }
                }
                s
            }
            SymbolData::ExpAtom { arg } => {
                let parts: Vec<String> = arg
                    .iter()
                    .map(|(c, e)| {
                        if *e == 1 {
                            c.data().name().to_string()
                        } else {
                            format!("{}^{}", c.data().name(), e)
                        }
                    })
                    .collect();
                if parts.is_empty() {
                    "exp(1)".into()
                } else {
                    format!("exp({})", parts.join("*"))
                }
            }
            other => other.name().to_string(),
        }
    }
}

#[derive(Hash, PartialEq, Eq, Clone)]
enum Key {
    Coord(String),
    Const(String),
    Func(String, Vec<(u8, Sym)>, Vec<u8>),
    Exp(Vec<(Sym, u32)>),
}

#[derive(Default)]
struct Interner {
    data: Vec<&'static SymbolData>,
    by_key: FxHashMap<Key, Sym>,
}

static INTERNER: LazyLock<RwLock<Interner>> = LazyLock::new(|| RwLock::new(Interner::default()));

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("derivative index {index} is not an argument of `{name}`")]
    IndexOutsideDependencies { name: String, index: u8 },
}

fn intern(key: Key, make: impl FnOnce() -> SymbolData) -> Sym {
    if let Some(s) = INTERNER.read().by_key.get(&key) {
        return *s;
    }
    let mut w = INTERNER.write();
    if let Some(s) = w.by_key.get(&key) {
        return *s;
    }
    let id = Sym(w.data.len() as u32);
    w.data.push(Box::leak(Box::new(make())));
    w.by_key.insert(key, id);
    id
}

impl Sym {
    pub fn coord(name: &str) -> Sym {
        intern(Key::Coord(name.to_string()), || SymbolData::Coord { name: name.to_string() })
    }

    pub fn constant(name: &str) -> Sym {
        intern(Key::Const(name.to_string()), || SymbolData::Const { name: name.to_string() })
    }

    /// Interns `name` differentiated by the multiset `multi` of chart indices.
    pub fn func(name: &str, deps: &[(u8, Sym)], multi: &[u8]) -> Result<Sym, SymbolError> {
        let mut multi = multi.to_vec();
        multi.sort_unstable();
        for i in &multi {
            if !deps.iter().any(|(j, _)| j == i) {
                return Err(SymbolError::IndexOutsideDependencies { name: name.to_string(), index: *i });
            }
        }
        // the same name with another argument list is a different function
        Ok(intern(Key::Func(name.to_string(), deps.to_vec(), multi.clone()), || SymbolData::Func {
            name: name.to_string(),
            deps: deps.to_vec(),
            multi,
        }))
    }

    /// Interns `exp(m)` for the coordinate monomial `m`.
    pub fn exp_atom(arg: &[(Sym, u32)]) -> Sym {
        let mut arg: Vec<(Sym, u32)> = arg.iter().copied().filter(|(_, e)| *e > 0).collect();
        arg.sort_by(|a, b| a.0.cmp_key(b.0));
        intern(Key::Exp(arg.clone()), || SymbolData::ExpAtom { arg })
    }

    pub fn data(self) -> &'static SymbolData {
        INTERNER.read().data[self.0 as usize]
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// Exponential atoms are units of the ring and may carry negative exponents.
    pub fn is_unit(self) -> bool {
        matches!(self.data(), SymbolData::ExpAtom { .. })
    }

    pub fn is_coord(self) -> bool {
        matches!(self.data(), SymbolData::Coord { .. })
    }

    /// For a function symbol, the same function differentiated once more
    /// with respect to the coordinate `coord`; `None` if it does not depend on it.
    pub fn func_derivative(self, coord: Sym) -> Option<Sym> {
        match self.data() {
            SymbolData::Func { name, deps, multi } => {
                let (idx, _) = deps.iter().find(|(_, c)| *c == coord)?;
                let mut m = multi.clone();
                m.push(*idx);
                Some(Sym::func(name, deps, &m).expect("index taken from dependency list"))
            }
            _ => None,
        }
    }

    /// Global deterministic symbol order: coordinates < constants <
    /// functions (by name, then multi-index) < exponential atoms.
    pub fn cmp_key(self, other: Sym) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        let a = self.data();
        let b = other.data();
        a.rank().cmp(&b.rank()).then_with(|| match (a, b) {
            (
                SymbolData::Func { name: n1, multi: m1, deps: d1 },
                SymbolData::Func { name: n2, multi: m2, deps: d2 },
            ) => n1
                .cmp(n2)
                .then_with(|| m1.len().cmp(&m2.len()))
                .then_with(|| m1.cmp(m2))
                .then_with(|| d1.len().cmp(&d2.len()))
                .then_with(|| {
                    let k1: Vec<u8> = d1.iter().map(|d| d.0).collect();
                    let k2: Vec<u8> = d2.iter().map(|d| d.0).collect();
                    k1.cmp(&k2)
                }),
            (SymbolData::ExpAtom { arg: a1 }, SymbolData::ExpAtom { arg: a2 }) => {
                let deg1: u32 = a1.iter().map(|x| x.1).sum();
                let deg2: u32 = a2.iter().map(|x| x.1).sum();
                deg1.cmp(&deg2).then_with(|| {
                    for (x, y) in a1.iter().zip(a2.iter()) {
                        let c = x.0.cmp_key(y.0).then(x.1.cmp(&y.1));
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                    a1.len().cmp(&a2.len())
                })
            }
            _ => a.name().cmp(b.name()),
        })
        .then(self.0.cmp(&other.0))
    }
}
