//! Poset JSON and Graphviz DOT export.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::ColoredPoset;

/// An element given by index or by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Elements {
    Count(usize),
    Names(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub elements: Elements,
    #[serde(default)]
    pub order: Vec<[ElementRef; 2]>,
    pub colors: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<ElementRef>,
}

fn resolve(names: &[String], r: &ElementRef) -> Result<usize> {
    match r {
        ElementRef::Index(i) => {
            if *i < names.len() {
                Ok(*i)
            } else {
                Err(Error::Index {
                    index: *i,
                    len: names.len(),
                })
            }
        }
        ElementRef::Name(s) => names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| Error::UnknownElement(s.clone())),
    }
}

impl PosetJson {
    pub fn into_poset(self) -> Result<ColoredPoset> {
        let names = match self.elements {
            Elements::Count(n) => (0..n).map(|i| i.to_string()).collect(),
            Elements::Names(v) => v,
        };
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(*n)) {
            return Err(Error::Invalid(format!("duplicate element name `{dup}`")));
        }
        let pairs = self
            .order
            .iter()
            .map(|[a, b]| Ok((resolve(&names, a)?, resolve(&names, b)?)))
            .collect::<Result<Vec<_>>>()?;
        let bottom = self
            .bottom
            .as_ref()
            .map(|b| resolve(&names, b))
            .transpose()?;
        let p = ColoredPoset::from_relation(names.len(), &pairs, &self.colors, bottom)?
            .with_names(names)?;
        Ok(match self.name {
            Some(n) => p.with_name(n),
            None => p,
        })
    }

    /// Names for elements, covering pairs by index.
    pub fn from_poset(p: &ColoredPoset) -> Self {
        PosetJson {
            name: p.name().map(str::to_string),
            elements: Elements::Names(p.names().to_vec()),
            order: p
                .hasse_edges()
                .into_iter()
                .map(|(a, b)| [ElementRef::Index(a), ElementRef::Index(b)])
                .collect(),
            colors: p.colors().to_vec(),
            bottom: p.bottom().map(ElementRef::Index),
        }
    }
}

pub fn poset_from_json(text: &str) -> Result<ColoredPoset> {
    serde_json::from_str::<PosetJson>(text)?.into_poset()
}

pub fn poset_to_json(p: &ColoredPoset) -> serde_json::Value {
    serde_json::to_value(PosetJson::from_poset(p)).expect("posets serialize")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram with color-1 elements filled, bottom at the bottom.
pub fn to_dot(p: &ColoredPoset) -> String {
    let mut out = format!(
        "digraph {} {{\n  rankdir=BT;\n",
        quote(p.name().unwrap_or("P"))
    );
    for i in 0..p.len() {
        let style = if p.color(i) == 1 {
            ", style=filled, fillcolor=gray"
        } else {
            ""
        };
        out.push_str(&format!(
            "  n{i} [label={}{style}];\n",
            quote(p.element_name(i))
        ));
    }
    for (a, b) in p.hasse_edges() {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}
