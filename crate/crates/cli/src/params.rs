use std::collections::BTreeMap;

use nahs_core::algebra::{format_q, parse_q, Q};
use nahs_core::symexpr::{Bindings, Expr};

use crate::error::CliError;

/// Named rational parameter values, in name order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params(BTreeMap<String, Q>);

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    /// Parses `name=value` where the value is `p`, `p/q` or a decimal.
    pub fn parse_assignment(s: &str) -> Result<(String, Q), CliError> {
        let (name, value) = s
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("expected name=value, got {s:?}")))?;
        let name = name.trim();
        let ok_name = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok_name {
            return Err(CliError::Input(format!("bad parameter name {name:?}")));
        }
        let v = parse_q(value).map_err(|e| CliError::Input(format!("parameter {name}: {e}")))?;
        Ok((name.to_string(), v))
    }

    pub fn from_assignments(items: &[String]) -> Result<Self, CliError> {
        let mut p = Params::new();
        for s in items {
            let (k, v) = Params::parse_assignment(s)?;
            p.set(&k, v);
        }
        Ok(p)
    }

    pub fn set(&mut self, name: &str, v: Q) {
        self.0.insert(name.to_string(), v);
    }

    pub fn get(&self, name: &str) -> Option<&Q> {
        self.0.get(name)
    }

    /// `self` with the entries of `over` taking precedence.
    pub fn overridden_by(&self, over: &Params) -> Params {
        let mut out = self.clone();
        for (k, v) in &over.0 {
            out.0.insert(k.clone(), v.clone());
        }
        out
    }

    pub fn bindings(&self) -> Bindings {
        let mut b = Bindings::new();
        for (k, v) in &self.0 {
            b.insert(k, Expr::c(v.clone()));
        }
        b
    }

    pub fn to_strings(&self) -> BTreeMap<String, String> {
        self.0.iter().map(|(k, v)| (k.clone(), format_q(v))).collect()
    }

    /// Parameters of `e` without a value.
    pub fn unbound_in(&self, e: &Expr) -> Vec<String> {
        e.params().into_iter().filter(|p| !self.0.contains_key(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nahs_core::algebra::q;

    #[test]
    fn assignments() {
        assert_eq!(Params::parse_assignment("e=1/2").unwrap(), ("e".into(), q(1, 2)));
        assert_eq!(Params::parse_assignment("alpha = -3").unwrap().1, q(-3, 1));
        assert_eq!(Params::parse_assignment("eps=0.25").unwrap().1, q(1, 4));
        for bad in ["e", "=1", "1e=2", "e=x", "e=1/0"] {
            assert!(matches!(Params::parse_assignment(bad), Err(CliError::Input(_))), "{bad}");
        }
    }

    #[test]
    fn override_order() {
        let mut a = Params::new();
        a.set("k", q(1, 1));
        a.set("eps", q(1, 1));
        let b = Params::from_assignments(&["k=2".into()]).unwrap();
        let c = a.overridden_by(&b);
        assert_eq!(c.get("k"), Some(&q(2, 1)));
        assert_eq!(c.get("eps"), Some(&q(1, 1)));
    }
}
