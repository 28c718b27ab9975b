//! Bundled axiom-schema fixtures.
//!
//! Every entry parses against its signature and prints to a fixed point.
//! The dense-constants sentence also ships with a finite structure on which
//! it evaluates exactly.

use serde::Serialize;

use crate::parser::{parse_formula, parse_signature, parse_structure, print_formula, ParseError};
use crate::signature::Signature;
use crate::structure::MetricStructure;
use crate::syntax::Formula;

const DENSE_SIG: &str = include_str!("../corpus/dense.msig");
const NORMED_SIG: &str = include_str!("../corpus/normed.msig");

/// The enumerating structure for the dense-constants sentence.
pub const DENSE_STRUCTURE: &str = include_str!("../corpus/dense.mstr");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub signature: &'static str,
    pub source: &'static str,
}

pub const ENTRIES: &[CorpusEntry] = &[
    CorpusEntry { name: "dense", signature: DENSE_SIG, source: include_str!("../corpus/dense.mfla") },
    CorpusEntry { name: "span", signature: NORMED_SIG, source: include_str!("../corpus/span.mfla") },
    CorpusEntry { name: "schauder", signature: NORMED_SIG, source: include_str!("../corpus/schauder.mfla") },
    CorpusEntry {
        name: "norm_equivalence",
        signature: NORMED_SIG,
        source: include_str!("../corpus/norm_equivalence.mfla"),
    },
    CorpusEntry { name: "hi_failure", signature: NORMED_SIG, source: include_str!("../corpus/hi_failure.mfla") },
    CorpusEntry { name: "non_reflexive", signature: NORMED_SIG, source: include_str!("../corpus/non_reflexive.mfla") },
    CorpusEntry {
        name: "stability_failure",
        signature: NORMED_SIG,
        source: include_str!("../corpus/stability_failure.mfla"),
    },
];

impl CorpusEntry {
    pub fn parse(&self) -> Result<(Signature, Formula), ParseError> {
        let (_, sig) = parse_signature(self.signature)?;
        let phi = parse_formula(self.source, &sig)?;
        Ok((sig, phi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusCheck {
    pub name: &'static str,
    pub printed: Option<String>,
    /// `print(parse(print(φ))) == print(φ)` and the reparsed AST is equal.
    pub fixed_point: bool,
    pub error: Option<String>,
}

impl CorpusCheck {
    pub fn ok(&self) -> bool {
        self.fixed_point && self.error.is_none()
    }
}

pub fn check_entry(entry: &CorpusEntry) -> CorpusCheck {
    let fail =
        |e: ParseError| CorpusCheck { name: entry.name, printed: None, fixed_point: false, error: Some(e.to_string()) };
    let (sig, phi) = match entry.parse() {
        Ok(x) => x,
        Err(e) => return fail(e),
    };
    let printed = print_formula(&phi);
    match parse_formula(&printed, &sig) {
        Ok(again) => CorpusCheck {
            name: entry.name,
            fixed_point: again == phi && print_formula(&again) == printed,
            printed: Some(printed),
            error: None,
        },
        Err(e) => CorpusCheck { printed: Some(printed), ..fail(e) },
    }
}

pub fn check_corpus() -> Vec<CorpusCheck> {
    ENTRIES.iter().map(check_entry).collect()
}

/// The dense-constants sentence and its enumerating structure.
pub fn dense_constants() -> (MetricStructure, Formula) {
    let m = parse_structure(DENSE_STRUCTURE).expect("bundled structure parses");
    let (_, phi) = ENTRIES[0].parse().expect("bundled sentence parses");
    (m, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{satisfies, EvalConfig, Verdict};

    #[test]
    fn corpus_is_a_fixed_point() {
        for check in check_corpus() {
            assert!(check.ok(), "{check:?}");
        }
    }

    #[test]
    fn dense_sentence_reaches_exactness() {
        let (m, phi) = dense_constants();
        assert!(phi.is_sentence());
        assert_eq!(satisfies(&m, &phi, &EvalConfig::with_depth(3)).unwrap(), Verdict::Yes);
        assert_eq!(satisfies(&m, &phi, &EvalConfig::with_depth(2)).unwrap(), Verdict::Unknown);
    }
}
