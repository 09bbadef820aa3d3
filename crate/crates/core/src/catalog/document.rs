//! Line-oriented metric documents.
//!
//! ```text
//! [metadata]
//! name = prm
//! [coords]
//! u
//! x : positive
//! [constants]
//! p
//! [functions]
//! w : u x y
//! [components]
//! g[1][1] = x*w - p^2*r^2/x^2
//! [assumptions]
//! nonzero: p
//! set: a = -p^2
//! ```
//!
//! `#` starts a comment. `bind:` is accepted as a synonym of `set:`.

use std::fmt::Write as _;

use super::MetricSpec;
use crate::expr::{parse_expr, AssumptionError, AssumptionSet, Context, DeclError, Expr, ParseErrorKind, Sym, SymbolData};
use crate::geometry::{Chart, ChartError, Tensor};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentErrorKind {
    #[error("unknown section `[{0}]`")]
    UnknownSection(String),
    #[error("entry outside of any section")]
    NoSection,
    #[error("malformed entry: {0}")]
    Malformed(String),
    #[error("unknown metadata key `{0}`")]
    UnknownKey(String),
    #[error(transparent)]
    Decl(#[from] DeclError),
    #[error(transparent)]
    Parse(ParseErrorKind),
    #[error("index {index} is outside 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("component g[{0}][{1}] is assigned more than once")]
    DuplicateComponent(usize, usize),
    #[error("components appear before the coordinates are complete")]
    CoordsAfterComponents,
    #[error("`{0}` is not a constant, function or function derivative")]
    BadTarget(String),
    #[error(transparent)]
    Assumption(#[from] AssumptionError),
    #[error(transparent)]
    Chart(#[from] ChartError),
}

/// Error with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct DocumentError {
    pub line: usize,
    pub column: usize,
    pub kind: DocumentErrorKind,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Metadata,
    Coords,
    Constants,
    Functions,
    Components,
    Assumptions,
}

/// Parses the target of a substitution: a constant, a function, or a
/// partial derivative of a function.
pub fn parse_target(ctx: &Context, src: &str) -> Result<Sym, DocumentErrorKind> {
    let e = parse_expr(ctx, src).map_err(|e| DocumentErrorKind::Parse(e.kind))?;
    let vars = e.vars();
    match vars.as_slice() {
        [s] if e == Expr::sym(*s) && matches!(s.data(), SymbolData::Const { .. } | SymbolData::Func { .. }) => Ok(*s),
        _ => Err(DocumentErrorKind::BadTarget(src.trim().to_string())),
    }
}

struct Loader {
    ctx: Context,
    name: String,
    description: String,
    entries: Vec<((usize, usize), Expr)>,
    assumptions: AssumptionSet,
}

pub fn load(text: &str) -> Result<MetricSpec, DocumentError> {
    let mut l = Loader {
        ctx: Context::new(),
        name: String::new(),
        description: String::new(),
        entries: Vec::new(),
        assumptions: AssumptionSet::new(),
    };
    let mut section = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let column = body.len() - body.trim_start().len() + 1;
        let at = |kind| DocumentError { line, column, kind };
        if let Some(head) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = Some(match head.trim() {
                "metadata" => Section::Metadata,
                "coords" => Section::Coords,
                "constants" => Section::Constants,
                "functions" => Section::Functions,
                "components" => Section::Components,
                "assumptions" => Section::Assumptions,
                other => return Err(at(DocumentErrorKind::UnknownSection(other.to_string()))),
            });
            continue;
        }
        let Some(sec) = section else { return Err(at(DocumentErrorKind::NoSection)) };
        l.entry(sec, trimmed).map_err(|(off, kind)| DocumentError { line, column: column + off, kind })?;
    }
    let chart = Chart::new(l.ctx).map_err(|e| DocumentError { line: 1, column: 1, kind: e.into() })?;
    let n = chart.dim();
    let mut g = Tensor::covariant(n, 2);
    for ((i, j), v) in l.entries {
        g.set(&[i, j], v.clone());
        g.set(&[j, i], v);
    }
    Ok(MetricSpec { name: l.name, description: l.description, chart, components: g, assumptions: l.assumptions })
}

type EntryError = (usize, DocumentErrorKind);

fn expr_at(ctx: &Context, src: &str, offset: usize) -> Result<Expr, EntryError> {
    parse_expr(ctx, src).map_err(|e| (offset + e.pos, DocumentErrorKind::Parse(e.kind)))
}

/// Offset of `part` within `whole`, both slices of the same line.
fn offset_of(whole: &str, part: &str) -> usize {
    part.as_ptr() as usize - whole.as_ptr() as usize
}

impl Loader {
    fn entry(&mut self, sec: Section, s: &str) -> Result<(), EntryError> {
        let malformed = |msg: &str| (0, DocumentErrorKind::Malformed(msg.to_string()));
        match sec {
            Section::Metadata => {
                let (k, v) = s.split_once('=').ok_or_else(|| malformed("expected `key = value`"))?;
                match k.trim() {
                    "name" => self.name = v.trim().to_string(),
                    "description" => self.description = v.trim().to_string(),
                    other => return Err((0, DocumentErrorKind::UnknownKey(other.to_string()))),
                }
            }
            Section::Coords => {
                if !self.entries.is_empty() {
                    return Err((0, DocumentErrorKind::CoordsAfterComponents));
                }
                let (name, positive) = match s.split_once(':') {
                    Some((n, flag)) if flag.trim() == "positive" => (n.trim(), true),
                    Some(_) => return Err(malformed("the only coordinate flag is `positive`")),
                    None => (s, false),
                };
                if !is_ident(name) {
                    return Err(malformed("expected a coordinate name"));
                }
                self.ctx.add_coord(name, positive).map_err(|e| (0, e.into()))?;
            }
            Section::Constants => {
                for name in s.split_whitespace() {
                    if !is_ident(name) {
                        return Err((offset_of(s, name), DocumentErrorKind::Malformed("expected a constant name".into())));
                    }
                    self.ctx.add_constant(name).map_err(|e| (offset_of(s, name), e.into()))?;
                }
            }
            Section::Functions => {
                let (name, deps) = s.split_once(':').ok_or_else(|| malformed("expected `name : coordinates`"))?;
                let name = name.trim();
                if !is_ident(name) {
                    return Err(malformed("expected a function name"));
                }
                let deps: Vec<&str> = deps.split_whitespace().collect();
                self.ctx.add_function(name, &deps).map_err(|e| (0, e.into()))?;
            }
            Section::Components => {
                let (lhs, rhs) = s.split_once('=').ok_or_else(|| malformed("expected `g[i][j] = expression`"))?;
                let (i, j) = parse_slot(lhs.trim()).ok_or_else(|| malformed("expected `g[i][j]`"))?;
                let n = self.ctx.dim();
                for idx in [i, j] {
                    if idx == 0 || idx > n {
                        return Err((0, DocumentErrorKind::IndexOutOfRange { index: idx, dim: n }));
                    }
                }
                let key = (i.min(j), i.max(j));
                if self.entries.iter().any(|e| e.0 == key) {
                    return Err((0, DocumentErrorKind::DuplicateComponent(i, j)));
                }
                let v = expr_at(&self.ctx, rhs, offset_of(s, rhs))?;
                self.entries.push((key, v));
            }
            Section::Assumptions => {
                let (kw, rest) = s.split_once(':').ok_or_else(|| malformed("expected `nonzero:` or `set:`"))?;
                match kw.trim() {
                    "nonzero" => {
                        let e = expr_at(&self.ctx, rest, offset_of(s, rest))?;
                        self.assumptions.push_nonzero(e);
                    }
                    "set" | "bind" => {
                        let (t, v) = rest.split_once('=').ok_or_else(|| malformed("expected `target = value`"))?;
                        let target = parse_target(&self.ctx, t).map_err(|k| (offset_of(s, t), k))?;
                        let value = expr_at(&self.ctx, v, offset_of(s, v))?;
                        self.assumptions.push(target, value).map_err(|e| (offset_of(s, t), e.into()))?;
                    }
                    other => return Err((0, DocumentErrorKind::Malformed(format!("unknown assumption kind `{other}`")))),
                }
            }
        }
        Ok(())
    }
}

fn is_ident(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic()) && ch.all(|c| c.is_ascii_alphanumeric())
}

fn parse_slot(s: &str) -> Option<(usize, usize)> {
    let rest = s.strip_prefix('g')?.trim_start().strip_prefix('[')?;
    let (i, rest) = rest.split_once(']')?;
    let rest = rest.trim_start().strip_prefix('[')?;
    let (j, rest) = rest.split_once(']')?;
    if !rest.trim().is_empty() {
        return None;
    }
    Some((i.trim().parse().ok()?, j.trim().parse().ok()?))
}

/// Document text for `spec`; loading it back gives equal components and assumptions.
pub fn serialize(spec: &MetricSpec) -> String {
    let mut out = String::new();
    let ctx = spec.chart.context();
    if !spec.name.is_empty() || !spec.description.is_empty() {
        out.push_str("[metadata]\n");
        if !spec.name.is_empty() {
            let _ = writeln!(out, "name = {}", spec.name);
        }
        if !spec.description.is_empty() {
            let _ = writeln!(out, "description = {}", spec.description);
        }
    }
    out.push_str("[coords]\n");
    for c in ctx.coords() {
        if c.positive {
            let _ = writeln!(out, "{} : positive", c.name);
        } else {
            let _ = writeln!(out, "{}", c.name);
        }
    }
    if !ctx.constants().is_empty() {
        out.push_str("[constants]\n");
        for (name, _) in ctx.constants() {
            let _ = writeln!(out, "{name}");
        }
    }
    if !ctx.functions().is_empty() {
        out.push_str("[functions]\n");
        for f in ctx.functions() {
            let deps: Vec<&str> = f.deps.iter().map(|i| ctx.coords()[i - 1].name.as_str()).collect();
            let _ = writeln!(out, "{} : {}", f.name, deps.join(" "));
        }
    }
    out.push_str("[components]\n");
    let n = spec.chart.dim();
    for i in 1..=n {
        for j in i..=n {
            let v = spec.components.get(&[i, j]);
            if !v.is_zero() {
                let _ = writeln!(out, "g[{i}][{j}] = {v}");
            }
        }
    }
    let a = &spec.assumptions;
    if !a.is_empty() {
        out.push_str("[assumptions]\n");
        for e in a.nonzero() {
            let _ = writeln!(out, "nonzero: {e}");
        }
        for s in a.substitutions() {
            let _ = writeln!(out, "set: {} = {}", s.target.data().display_name(), s.value);
        }
    }
    out
}
