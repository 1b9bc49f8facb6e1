use super::basis_for;
use crate::error::{Error, Result};
use crate::features::{BasisCache, Parameter};
use crate::graph::{
    canonical_form, canonical_form_anchored, enumerate_connected_graphs, parse_pattern, Pattern,
};
use crate::spasm::{filter_min_treewidth, indsub_property_param, predicates, LinearCombination};

/// One entry of a `--patterns` list.
#[derive(Clone, Debug)]
pub enum ParamSpec {
    /// `omega-con-<k>`: Hom features for every connected graph on 2..=k
    /// vertices (1..=k with the singleton).
    OmegaCon(usize),
    /// `graphlets-<k>`: number of connected induced k-vertex subgraphs.
    Graphlets(usize),
    Hom(Pattern),
    Sub(Pattern),
    Inj(Pattern),
    IndSub(Pattern),
}

fn macro_size(text: &str, prefix: &str) -> Option<Result<usize>> {
    let k = text.strip_prefix(prefix)?;
    Some(
        k.parse::<usize>()
            .map_err(|_| Error::UnknownPattern(text.to_string())),
    )
}

/// Parses `omega-con-<k>`, `graphlets-<k>`, `hom:P`, `sub:P`, `inj:P`,
/// `indsub:P` or a bare pattern `P` (meaning `sub:P`).
pub fn parse_param_spec(text: &str) -> Result<ParamSpec> {
    let text = text.trim();
    if let Some(k) = macro_size(text, "omega-con-") {
        return Ok(ParamSpec::OmegaCon(k?));
    }
    if let Some(k) = macro_size(text, "graphlets-") {
        return Ok(ParamSpec::Graphlets(k?));
    }
    let (kind, pattern) = match text.split_once(':') {
        Some((kind, rest)) => (kind, rest),
        None => ("sub", text),
    };
    let p = parse_pattern(pattern)?;
    Ok(match kind {
        "hom" => ParamSpec::Hom(p),
        "sub" => ParamSpec::Sub(p),
        "inj" => ParamSpec::Inj(p),
        "indsub" if p.anchor().is_none() => ParamSpec::IndSub(p),
        "indsub" => {
            return Err(Error::Config(format!(
                "{text}: induced counts are graph-level only"
            )))
        }
        _ => return Err(Error::UnknownPattern(text.to_string())),
    })
}

#[derive(Clone, Debug, Default)]
pub struct ExpandOptions<'a> {
    pub include_singleton: bool,
    pub min_treewidth: Option<i64>,
    pub cache: Option<&'a BasisCache>,
}

fn cached(
    cache: Option<&BasisCache>,
    pattern: &Pattern,
    mode: &str,
    compute: impl FnOnce() -> Result<LinearCombination>,
) -> Result<LinearCombination> {
    let Some(cache) = cache else {
        return compute();
    };
    let (key, mode) = match pattern {
        Pattern::Plain(g) => (canonical_form(g).key, mode.to_string()),
        Pattern::Anchored(a) => (canonical_form_anchored(a).key, format!("{mode}-node")),
    };
    cache.get_or_compute(&key, &mode, compute)
}

/// Expands one spec into named Hom-basis parameters.
pub fn expand_spec(text: &str, opts: &ExpandOptions) -> Result<Vec<Parameter>> {
    let spec = parse_param_spec(text)?;
    let params = match spec {
        ParamSpec::OmegaCon(k) => {
            let min = if opts.include_singleton { 1 } else { 2 };
            enumerate_connected_graphs(min, k)?
                .iter()
                .map(|g| {
                    let p = Pattern::Plain(g.clone());
                    let c = LinearCombination::hom(&p);
                    Parameter::new(format!("hom:{}", c.terms()[0].key()), c)
                })
                .collect()
        }
        ParamSpec::Graphlets(k) => vec![Parameter::new(
            text,
            indsub_property_param(k, &predicates::connected)?,
        )],
        ParamSpec::Hom(p) => vec![Parameter::new(text, LinearCombination::hom(&p))],
        ParamSpec::Sub(p) => vec![Parameter::new(
            text,
            cached(opts.cache, &p, "sub", || basis_for(&p, "sub"))?,
        )],
        ParamSpec::Inj(p) => vec![Parameter::new(
            text,
            cached(opts.cache, &p, "inj", || basis_for(&p, "inj"))?,
        )],
        ParamSpec::IndSub(p) => vec![Parameter::new(
            text,
            cached(opts.cache, &p, "indsub", || basis_for(&p, "indsub"))?,
        )],
    };
    match opts.min_treewidth {
        None => Ok(params),
        Some(k) => params
            .into_iter()
            .map(|p| {
                Ok(Parameter {
                    combination: filter_min_treewidth(&p.combination, k)?,
                    name: p.name,
                })
            })
            .collect(),
    }
}

/// Expands every spec, keeping the given order.
pub fn expand_specs(texts: &[String], opts: &ExpandOptions) -> Result<Vec<Parameter>> {
    let mut out = Vec::new();
    for t in texts {
        out.extend(expand_spec(t, opts)?);
    }
    Ok(out)
}
