use super::symbol::{Sym, SymbolError};

/// A coordinate of a chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordDecl {
    pub name: String,
    pub sym: Sym,
    pub positive: bool,
}

/// An abstract function together with the chart indices it depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: String,
    /// 1-based chart indices, ascending.
    pub deps: Vec<usize>,
    pub sym: Sym,
}

/// Declared identifiers in scope for parsing and printing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    coords: Vec<CoordDecl>,
    constants: Vec<(String, Sym)>,
    functions: Vec<FunctionDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeclError {
    #[error("identifier `{0}` is declared twice")]
    Duplicate(String),
    #[error("function `{func}` depends on undeclared coordinate `{coord}`")]
    UnknownCoordinate { func: String, coord: String },
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    fn taken(&self, name: &str) -> bool {
        self.coords.iter().any(|c| c.name == name)
            || self.constants.iter().any(|c| c.0 == name)
            || self.functions.iter().any(|f| f.name == name)
            || name == "exp"
            || name == "d"
    }

    pub fn add_coord(&mut self, name: &str, positive: bool) -> Result<Sym, DeclError> {
        if self.taken(name) {
            return Err(DeclError::Duplicate(name.to_string()));
        }
        let sym = Sym::coord(name);
        self.coords.push(CoordDecl { name: name.to_string(), sym, positive });
        Ok(sym)
    }

    pub fn add_constant(&mut self, name: &str) -> Result<Sym, DeclError> {
        if self.taken(name) {
            return Err(DeclError::Duplicate(name.to_string()));
        }
        let sym = Sym::constant(name);
        self.constants.push((name.to_string(), sym));
        Ok(sym)
    }

    /// Declares `name(args...)` where `args` are coordinate names.
    pub fn add_function(&mut self, name: &str, args: &[&str]) -> Result<Sym, DeclError> {
        if self.taken(name) {
            return Err(DeclError::Duplicate(name.to_string()));
        }
        let mut deps = Vec::new();
        for a in args {
            let i = self
                .coord_index(a)
                .ok_or_else(|| DeclError::UnknownCoordinate { func: name.to_string(), coord: a.to_string() })?;
            deps.push(i);
        }
        deps.sort_unstable();
        deps.dedup();
        let dep_syms: Vec<(u8, Sym)> = deps.iter().map(|i| (*i as u8, self.coords[i - 1].sym)).collect();
        let sym = Sym::func(name, &dep_syms, &[])?;
        self.functions.push(FunctionDecl { name: name.to_string(), deps, sym });
        Ok(sym)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[CoordDecl] {
        &self.coords
    }

    pub fn constants(&self) -> &[(String, Sym)] {
        &self.constants
    }

    pub fn functions(&self) -> &[FunctionDecl] {
        &self.functions
    }

    /// 1-based chart index of a coordinate.
    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == name).map(|i| i + 1)
    }

    pub fn coord_sym(&self, index: usize) -> Sym {
        self.coords[index - 1].sym
    }

    pub fn coord(&self, name: &str) -> Option<&CoordDecl> {
        self.coords.iter().find(|c| c.name == name)
    }

    pub fn is_positive_coord(&self, s: Sym) -> bool {
        self.coords.iter().any(|c| c.sym == s && c.positive)
    }

    pub fn constant(&self, name: &str) -> Option<Sym> {
        self.constants.iter().find(|c| c.0 == name).map(|c| c.1)
    }

    pub fn function(&self, name: &str) -> Option<&FunctionDecl> {
        self.functions.iter().find(|f| f.name == name)
    }

    /// The derivative symbol `name` differentiated by the given chart indices.
    pub fn function_derivative(&self, name: &str, indices: &[usize]) -> Option<Result<Sym, SymbolError>> {
        let f = self.function(name)?;
        let deps: Vec<(u8, Sym)> = f.deps.iter().map(|i| (*i as u8, self.coords[i - 1].sym)).collect();
        let multi: Vec<u8> = indices.iter().map(|i| *i as u8).collect();
        Some(Sym::func(name, &deps, &multi))
    }

    /// Whether every coordinate name is one character, so `w_xy` is unambiguous.
    pub fn short_coord_names(&self) -> bool {
        self.coords.iter().all(|c| c.name.chars().count() == 1)
    }
}
