use super::scalar::Expr;
use super::symbol::{Sym, SymbolData};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssumptionError {
    #[error("`{0}` cannot be the target of a substitution")]
    BadTarget(String),
    #[error("substitution for `{0}` refers to itself")]
    SelfReferential(String),
    #[error("substitutions do not terminate (cycle through `{0}`)")]
    Cyclic(String),
    #[error("substitution makes a denominator vanish")]
    Singular,
}

/// One rule `target -> value`. A function target also rewrites every
/// partial derivative of the function whose multi-index contains the
/// target's multi-index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub target: Sym,
    pub value: Expr,
}

/// Ordered substitutions plus expressions declared nonzero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssumptionSet {
    subs: Vec<Substitution>,
    nonzero: Vec<Expr>,
}

const MAX_ROUNDS: usize = 64;

/// Removes `sub` from the multiset `multi`; `None` if it is not contained.
fn multiset_minus(multi: &[u8], sub: &[u8]) -> Option<Vec<u8>> {
    let mut rest = multi.to_vec();
    for i in sub {
        let k = rest.iter().position(|j| j == i)?;
        rest.remove(k);
    }
    Some(rest)
}

impl AssumptionSet {
    pub fn new() -> AssumptionSet {
        AssumptionSet::default()
    }

    pub fn substitutions(&self) -> &[Substitution] {
        &self.subs
    }

    pub fn nonzero(&self) -> &[Expr] {
        &self.nonzero
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty() && self.nonzero.is_empty()
    }

    /// Appends `target -> value`. The value is first rewritten by the rules
    /// already present, and the rule must not mention its own target.
    pub fn push(&mut self, target: Sym, value: Expr) -> Result<(), AssumptionError> {
        match target.data() {
            SymbolData::Const { .. } | SymbolData::Func { .. } => {}
            other => return Err(AssumptionError::BadTarget(other.display_name())),
        }
        let value = self.apply(&value)?;
        let probe = Substitution { target, value: value.clone() };
        if value.vars().iter().any(|s| rule_image(&probe, *s).is_some()) {
            return Err(AssumptionError::SelfReferential(target.data().display_name()));
        }
        self.subs.push(probe);
        Ok(())
    }

    pub fn push_nonzero(&mut self, e: Expr) {
        if !self.nonzero.contains(&e) {
            self.nonzero.push(e);
        }
    }

    /// Rewrites `e` until no rule applies.
    pub fn apply(&self, e: &Expr) -> Result<Expr, AssumptionError> {
        if self.subs.is_empty() {
            return Ok(e.clone());
        }
        let mut cur = e.clone();
        for _ in 0..MAX_ROUNDS {
            let mut changed = false;
            let next = cur
                .try_map_symbols(&mut |s| {
                    let img = self.image(s);
                    changed |= img.is_some();
                    img
                })
                .ok_or(AssumptionError::Singular)?;
            if !changed {
                return Ok(next);
            }
            cur = next;
        }
        let culprit = cur
            .vars()
            .into_iter()
            .find(|s| self.image(*s).is_some())
            .map(|s| s.data().display_name())
            .unwrap_or_default();
        Err(AssumptionError::Cyclic(culprit))
    }

    /// Image of a single generator under the first matching rule.
    fn image(&self, s: Sym) -> Option<Expr> {
        self.subs.iter().find_map(|r| rule_image(r, s))
    }

    /// Whether `e` vanishes once the substitutions are applied.
    pub fn is_zero(&self, e: &Expr) -> bool {
        match self.apply(e) {
            Ok(v) => v.is_zero(),
            Err(_) => false,
        }
    }

    /// Whether `e` is covered by a nonzero declaration, up to a constant
    /// factor and a monomial in constants or positive coordinates.
    pub fn declared_nonzero(&self, e: &Expr) -> bool {
        let Ok(e) = self.apply(e) else { return false };
        self.nonzero.iter().any(|d| {
            let Ok(d) = self.apply(d) else { return false };
            match e.div(&d) {
                Some(q) => q.num().is_monomial() && q.den().is_monomial(),
                None => false,
            }
        })
    }

    /// Concatenation; rules of `other` come after those of `self`.
    pub fn extended(&self, other: &AssumptionSet) -> Result<AssumptionSet, AssumptionError> {
        let mut out = self.clone();
        for r in &other.subs {
            out.push(r.target, r.value.clone())?;
        }
        for n in &other.nonzero {
            out.push_nonzero(n.clone());
        }
        Ok(out)
    }
}

fn rule_image(r: &Substitution, s: Sym) -> Option<Expr> {
    if s == r.target {
        return Some(r.value.clone());
    }
    let (
        SymbolData::Func { name: tn, deps: td, multi: tm },
        SymbolData::Func { name: sn, deps: sd, multi: sm },
    ) = (r.target.data(), s.data())
    else {
        return None;
    };
    if tn != sn || td != sd || sm.len() <= tm.len() {
        return None;
    }
    let rest = multiset_minus(sm, tm)?;
    let mut v = r.value.clone();
    for i in rest {
        let coord = sd.iter().find(|d| d.0 == i).expect("index in dependencies").1;
        v = v.diff(coord);
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::context::Context;
    use crate::expr::parse::parse_expr;

    fn ctx() -> Context {
        let mut c = Context::new();
        for n in ["u", "r", "x", "y"] {
            c.add_coord(n, n == "x").unwrap();
        }
        c.add_constant("a").unwrap();
        c.add_function("wa", &["x", "y"]).unwrap();
        c
    }

    #[test]
    fn derivative_rewriting_follows_a_function_rule() {
        let c = ctx();
        let mut s = AssumptionSet::new();
        let w = c.function("wa").unwrap().sym;
        s.push(w, parse_expr(&c, "x^2*y").unwrap()).unwrap();
        let e = parse_expr(&c, "wa_xy + wa_yy").unwrap();
        assert_eq!(s.apply(&e).unwrap(), parse_expr(&c, "2*x").unwrap());
    }

    #[test]
    fn derivative_rules_apply_to_higher_partials() {
        let c = ctx();
        let mut s = AssumptionSet::new();
        let wxx = c.function_derivative("wa", &[3, 3]).unwrap().unwrap();
        s.push(wxx, parse_expr(&c, "-wa_yy").unwrap()).unwrap();
        let e = parse_expr(&c, "wa_xxy + wa_yyy").unwrap();
        assert!(s.is_zero(&e));
        assert!(!s.is_zero(&parse_expr(&c, "wa_xy").unwrap()));
    }

    #[test]
    fn self_reference_is_rejected() {
        let c = ctx();
        let mut s = AssumptionSet::new();
        let w = c.function("wa").unwrap().sym;
        let err = s.push(w, parse_expr(&c, "wa_x + 1").unwrap()).unwrap_err();
        assert!(matches!(err, AssumptionError::SelfReferential(_)));
        let x = c.coord("x").unwrap().sym;
        assert!(matches!(s.push(x, Expr::one()), Err(AssumptionError::BadTarget(_))));
    }

    #[test]
    fn nonzero_declarations_cover_scaled_multiples() {
        let c = ctx();
        let mut s = AssumptionSet::new();
        s.push_nonzero(parse_expr(&c, "wa_xx + wa_yy").unwrap());
        assert!(s.declared_nonzero(&parse_expr(&c, "-3*a*x^2*(wa_xx + wa_yy)/2").unwrap()));
        assert!(!s.declared_nonzero(&parse_expr(&c, "wa_xx").unwrap()));
    }
}
