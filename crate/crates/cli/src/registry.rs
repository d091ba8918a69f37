//! Built-in examples. Each entry carries everything the analysis pipeline
//! needs, together with the verdicts it is expected to reproduce.

use nahs_core::kovacic::{GroupClass, Obstruction, Tristate};
use serde::Serialize;

use crate::params::Params;

/// How the Hamiltonian framings are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FramingSpec {
    /// Antiderivative of `f` in `x` (power-rule terms only).
    FromF,
    /// `H = p1^2/2 - F` for the given potential `F`, with `F_x = f`.
    Potential { potential: &'static str },
    /// `x'' = g_x (g + a) + alpha`: all three framings, with `alpha` the
    /// parameter of that name.
    GA { g: &'static str, a: &'static str },
}

/// Printed forms to compare against (any may be absent). Expressions may
/// use the example's parameters; in `nve`, `x` stands for the particular
/// solution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Reference {
    pub nve: Option<&'static str>,
    pub p: Option<&'static str>,
    pub q: Option<&'static str>,
    pub r: Option<&'static str>,
}

/// Where an expected verdict comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// A non-integrability claim in the literature for this equation.
    Literature,
    /// Recorded from the pipeline; no claim specific to these values.
    Computed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Expected {
    Verdict {
        liouvillian: bool,
        group_class: GroupClass,
        virtually_abelian: Tristate,
        obstruction: Obstruction,
    },
    /// The analysis stops with exit code 3 for the stated reason.
    Unsupported { reason: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpectedCase {
    pub params: &'static [(&'static str, &'static str)],
    pub verdict: Expected,
    /// Expected Liouvillian status of `zeta'' = -r zeta`, when both signs
    /// are analysed.
    pub negated_liouvillian: Option<bool>,
    pub source: Source,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExampleSpec {
    pub id: &'static str,
    pub family: &'static str,
    pub summary: &'static str,
    /// Right side `f(x, t)` of `x'' = f`.
    pub f: &'static str,
    pub framing: FramingSpec,
    /// Particular solutions `x = xhat(t)`, selected by parameter value:
    /// `(name, value, solution)`; a `None` key matches any value.
    pub solutions: &'static [(Option<(&'static str, &'static str)>, &'static str)],
    pub change: &'static str,
    /// Scale of the change (`eps`, or `lambda` for `exp`): a rational, a
    /// parameter name, or a parameter name with a leading `-`.
    pub change_scale: &'static str,
    pub defaults: &'static [(&'static str, &'static str)],
    pub reference: Reference,
    /// Also analyse `zeta'' = -r zeta` (the printed reduced form has the
    /// opposite sign, or sign robustness is part of the claim).
    pub both_signs: bool,
    pub expected: &'static [ExpectedCase],
}

impl ExampleSpec {
    pub fn default_params(&self) -> Params {
        params_of(self.defaults)
    }

    /// The particular solution for the given parameter values.
    pub fn solution_for(&self, p: &Params) -> Option<&'static str> {
        self.solutions.iter().find_map(|(key, sol)| match key {
            None => Some(*sol),
            Some((name, value)) => {
                let want = nahs_core::algebra::parse_q(value).ok()?;
                (p.get(name) == Some(&want)).then_some(*sol)
            }
        })
    }
}

pub fn params_of(items: &[(&str, &str)]) -> Params {
    let mut p = Params::new();
    for (k, v) in items {
        p.set(k, nahs_core::algebra::parse_q(v).expect("registry values are rationals"));
    }
    p
}

const SL2_RATIONAL: Expected = Expected::Verdict {
    liouvillian: false,
    group_class: GroupClass::SL2,
    virtually_abelian: Tristate::No,
    obstruction: Obstruction::RationalFirstIntegrals,
};

const SL2_MEROMORPHIC: Expected = Expected::Verdict {
    liouvillian: false,
    group_class: GroupClass::SL2,
    virtually_abelian: Tristate::No,
    obstruction: Obstruction::MeromorphicFirstIntegrals,
};

const HILL_DEFAULTS: &[(&str, &str)] = &[("k", "1"), ("eps", "1")];
const HILL_SOLUTION: &[(Option<(&str, &str)>, &str)] = &[(None, "0")];

pub const REGISTRY: &[ExampleSpec] = &[
    ExampleSpec {
        id: "hill-exp",
        family: "Hill-Schrodinger x'' = k(t) x",
        summary: "k(t) = k exp(-eps t), tau = exp(-eps t)",
        f: "k*exp(-eps*t)*x",
        framing: FramingSpec::FromF,
        solutions: HILL_SOLUTION,
        change: "exp",
        change_scale: "-eps",
        defaults: HILL_DEFAULTS,
        reference: Reference {
            nve: Some("k*exp(-eps*t)"),
            p: Some("1/tau"),
            q: Some("-k/(eps^2*tau)"),
            r: None,
        },
        both_signs: false,
        expected: &[ExpectedCase {
            params: &[("k", "1"), ("eps", "1")],
            verdict: SL2_RATIONAL,
            negated_liouvillian: None,
            source: Source::Literature,
        }],
    },
    ExampleSpec {
        id: "hill-poly",
        family: "Hill-Schrodinger x'' = k(t) x",
        summary: "k(t) = k P(eps t) with P(s) = 1 + s, tau = eps t",
        f: "k*(1 + eps*t)*x",
        framing: FramingSpec::FromF,
        solutions: HILL_SOLUTION,
        change: "affine",
        change_scale: "eps",
        defaults: HILL_DEFAULTS,
        reference: Reference {
            nve: Some("k*(1 + eps*t)"),
            p: Some("0"),
            q: Some("-k*(1 + tau)/eps^2"),
            r: None,
        },
        both_signs: false,
        expected: &[ExpectedCase {
            params: &[("k", "1"), ("eps", "1")],
            verdict: SL2_RATIONAL,
            negated_liouvillian: None,
            source: Source::Literature,
        }],
    },
    ExampleSpec {
        id: "hill-sinh",
        family: "Hill-Schrodinger x'' = k(t) x",
        summary: "k(t) = k (1 + sinh(eps t)), tau = sinh(eps t)",
        f: "k*(1 + sinh(eps*t))*x",
        framing: FramingSpec::FromF,
        solutions: HILL_SOLUTION,
        change: "sinh",
        change_scale: "eps",
        defaults: HILL_DEFAULTS,
        reference: Reference {
            nve: Some("k*(1 + sinh(eps*t))"),
            p: Some("tau/(1 + tau^2)"),
            q: Some("-k*(1 + tau)/(eps^2*(1 + tau^2))"),
            r: None,
        },
        both_signs: false,
        expected: &[ExpectedCase {
            params: &[("k", "1"), ("eps", "1")],
            verdict: Expected::Unsupported {
                reason: "irrational poles at tau = +-i",
            },
            negated_liouvillian: None,
            source: Source::Computed,
        }],
    },
    ExampleSpec {
        id: "hill-cosh",
        family: "Hill-Schrodinger x'' = k(t) x",
        summary: "k(t) = k (1 + cosh(eps t)), tau = cosh(eps t)",
        f: "k*(1 + cosh(eps*t))*x",
        framing: FramingSpec::FromF,
        solutions: HILL_SOLUTION,
        change: "cosh",
        change_scale: "eps",
        defaults: HILL_DEFAULTS,
        reference: Reference {
            nve: Some("k*(1 + cosh(eps*t))"),
            p: Some("tau/(tau^2 - 1)"),
            q: Some("-k*(1 + tau)/(eps^2*(tau^2 - 1))"),
            r: None,
        },
        both_signs: false,
        expected: &[ExpectedCase {
            params: &[("k", "1"), ("eps", "1")],
            verdict: SL2_RATIONAL,
            negated_liouvillian: None,
            source: Source::Literature,
        }],
    },
    ExampleSpec {
        id: "hill-sin",
        family: "Hill-Schrodinger x'' = k(t) x",
        summary: "k(t) = k (1 + sin(eps t)), tau = sin(eps t)",
        f: "k*(1 + sin(eps*t))*x",
        framing: FramingSpec::FromF,
        solutions: HILL_SOLUTION,
        change: "sin",
        change_scale: "eps",
        defaults: HILL_DEFAULTS,
        reference: Reference {
            nve: Some("k*(1 + sin(eps*t))"),
            p: Some("-tau/(1 - tau^2)"),
            q: Some("-k*(1 + tau)/(eps^2*(1 - tau^2))"),
            r: None,
        },
        both_signs: false,
        expected: &[ExpectedCase {
            params: &[("k", "1"), ("eps", "1")],
            verdict: SL2_RATIONAL,
            negated_liouvillian: None,
            source: Source::Literature,
        }],
    },
    ExampleSpec {
        id: "hill-cos",
        family: "Hill-Schrodinger x'' = k(t) x",
        summary: "k(t) = k (1 + cos(eps t)), tau = cos(eps t)",
        f: "k*(1 + cos(eps*t))*x",
        framing: FramingSpec::FromF,
        solutions: HILL_SOLUTION,
        change: "cos",
        change_scale: "eps",
        defaults: HILL_DEFAULTS,
        reference: Reference {
            nve: Some("k*(1 + cos(eps*t))"),
            p: Some("-tau/(1 - tau^2)"),
            q: Some("-k*(1 + tau)/(eps^2*(1 - tau^2))"),
            r: None,
        },
        both_signs: false,
        expected: &[ExpectedCase {
            params: &[("k", "1"), ("eps", "1")],
            verdict: SL2_RATIONAL,
            negated_liouvillian: None,
            source: Source::Literature,
        }],
    },
    ExampleSpec {
        id: "painleve2",
        family: "Painleve II",
        summary: "x'' = 2x^3 + t x + alpha along x = 0 (alpha = 0) or x = -1/t (alpha = 1)",
        f: "2*x^3 + t*x + alpha",
        framing: FramingSpec::GA { g: "x^2", a: "t/2" },
        solutions: &[(Some(("alpha", "0")), "0"), (Some(("alpha", "1")), "-1/t")],
        change: "affine",
        change_scale: "1",
        defaults: &[("alpha", "0")],
        reference: Reference {
            nve: Some("6*x^2 + t"),
            p: Some("0"),
            q: None,
            r: None,
        },
        both_signs: false,
        expected: &[
            ExpectedCase {
                params: &[("alpha", "0")],
                verdict: SL2_RATIONAL,
                negated_liouvillian: None,
                source: Source::Literature,
            },
            ExpectedCase {
                params: &[("alpha", "1")],
                verdict: SL2_RATIONAL,
                negated_liouvillian: None,
                source: Source::Literature,
            },
        ],
    },
    ExampleSpec {
        id: "inverse-cubic",
        family: "x'' = -1/(4x^3) - t/x^2 + alpha",
        summary: "along x = sqrt(t) (alpha = 1), tau = sqrt(t)",
        f: "-1/(4*x^3) - t/x^2 + alpha",
        framing: FramingSpec::GA { g: "-1/(2*x)", a: "-2*t" },
        solutions: &[(Some(("alpha", "1")), "sqrt(t)")],
        change: "sqrt",
        change_scale: "1",
        defaults: &[("alpha", "1")],
        reference: Reference {
            nve: Some("3/(4*t^2) + 2/sqrt(t)"),
            p: Some("-1/tau"),
            q: Some("-(8*tau^3 + 3)/tau^2"),
            r: Some("(32*tau^3 + 15)/(4*tau^2)"),
        },
        both_signs: false,
        expected: &[ExpectedCase {
            params: &[("alpha", "1")],
            verdict: SL2_RATIONAL,
            negated_liouvillian: None,
            source: Source::Literature,
        }],
    },
    ExampleSpec {
        id: "sitnikov-exact",
        family: "Sitnikov problem (true anomaly)",
        summary: "x'' = -(e cos t + (1/4 + x^2)^(-3/2)) x/(1 + e cos t) along x = 0, tau = cos t",
        f: "-(e*cos(t) + (1/4 + x^2)^(-3/2))*x/(1 + e*cos(t))",
        framing: FramingSpec::Potential {
            potential: "-(e*x^2*cos(t) - 4*(1 + 4*x^2)^(-1/2))/(2*(1 + e*cos(t)))",
        },
        solutions: &[(None, "0")],
        change: "cos",
        change_scale: "1",
        defaults: &[("e", "1/2")],
        reference: Reference {
            nve: Some("(e*cos(t) + 8)/(e*cos(t) + 1)"),
            p: Some("-tau/(1 - tau^2)"),
            q: Some("-(e*tau + 8)/((e*tau + 1)*(1 - tau^2))"),
            r: Some("(5*e*tau^3 + 33*tau^2 - 2*e*tau - 30)/((e*tau + 1)*4*(1 - tau^2)^2)"),
        },
        both_signs: true,
        expected: &[
            ExpectedCase {
                params: &[("e", "1/2")],
                verdict: SL2_MEROMORPHIC,
                negated_liouvillian: Some(false),
                source: Source::Literature,
            },
            ExpectedCase {
                params: &[("e", "1")],
                verdict: SL2_MEROMORPHIC,
                negated_liouvillian: Some(false),
                source: Source::Literature,
            },
        ],
    },
    ExampleSpec {
        id: "sitnikov-approx",
        family: "Sitnikov problem (first order in e)",
        summary: "H = p1^2/2 - 2e cos(q2)/(4q1^2 + 1)^(3/2) - 2/sqrt(4q1^2 + 1) along x = 0, tau = cos t",
        f: "-8*x/(4*x^2 + 1)^(3/2) - 24*e*x*cos(t)/(4*x^2 + 1)^(5/2)",
        framing: FramingSpec::Potential {
            potential: "2*e*cos(t)/(4*x^2 + 1)^(3/2) + 2/(4*x^2 + 1)^(1/2)",
        },
        solutions: &[(None, "0")],
        change: "cos",
        change_scale: "1",
        defaults: &[("e", "1/2")],
        reference: Reference {
            nve: Some("-24*e*cos(t) - 8"),
            p: Some("-tau/(1 - tau^2)"),
            q: Some("(24*e*tau + 8)/(1 - tau^2)"),
            r: Some("(96*e*tau^3 + 31*tau^2 - 96*e*tau - 34)/(4*(1 - tau^2)^2)"),
        },
        both_signs: true,
        expected: &[ExpectedCase {
            params: &[("e", "1/2")],
            verdict: SL2_RATIONAL,
            negated_liouvillian: Some(false),
            source: Source::Literature,
        }],
    },
];

pub fn lookup(id: &str) -> Option<&'static ExampleSpec> {
    REGISTRY.iter().find(|s| s.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nahs_core::symexpr::parse;

    #[test]
    fn entries_parse() {
        for s in REGISTRY {
            parse(s.f).unwrap_or_else(|e| panic!("{}: {e}", s.id));
            for (_, sol) in s.solutions {
                parse(sol).unwrap();
            }
            if let FramingSpec::Potential { potential } = s.framing {
                parse(potential).unwrap();
            }
            let r = s.reference;
            for e in [r.nve, r.p, r.q, r.r].into_iter().flatten() {
                parse(e).unwrap_or_else(|err| panic!("{}: {e}: {err}", s.id));
            }
            assert!(!s.expected.is_empty());
        }
        let ids: Vec<_> = REGISTRY.iter().map(|s| s.id).collect();
        assert_eq!(
            ids,
            [
                "hill-exp", "hill-poly", "hill-sinh", "hill-cosh", "hill-sin", "hill-cos",
                "painleve2", "inverse-cubic", "sitnikov-exact", "sitnikov-approx"
            ]
        );
    }

    #[test]
    fn solutions_by_parameter() {
        let pii = lookup("painleve2").unwrap();
        assert_eq!(pii.solution_for(&params_of(&[("alpha", "1")])), Some("-1/t"));
        assert_eq!(pii.solution_for(&params_of(&[("alpha", "0")])), Some("0"));
        assert_eq!(pii.solution_for(&params_of(&[("alpha", "2")])), None);
        assert_eq!(lookup("hill-cos").unwrap().solution_for(&Params::new()), Some("0"));
    }
}
