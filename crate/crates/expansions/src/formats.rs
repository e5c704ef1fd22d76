//! JSON encodings of morphisms, automata and BBP series.

use std::collections::BTreeMap;
use std::sync::Arc;

use expansions_core::automata::Dfao;
use expansions_core::bbp::{BbpSpec, BbpTerm};
use expansions_core::words::{Alphabet, Morphism};
use serde::{Deserialize, Serialize};

/// `{"src": [...], "dst": [...], "map": {"a": "ab", ...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub src: Vec<String>,
    pub dst: Vec<String>,
    pub map: BTreeMap<String, String>,
}

impl MorphismJson {
    pub fn from_morphism(m: &Morphism) -> Self {
        let map =
            m.source().glyphs().iter().zip(m.images()).map(|(g, img)| (g.clone(), m.target().render(img))).collect();
        Self { src: m.source().glyphs().to_vec(), dst: m.target().glyphs().to_vec(), map }
    }

    pub fn to_morphism(&self) -> anyhow::Result<Morphism> {
        let src = Arc::new(Alphabet::new(self.src.clone())?);
        let dst = Arc::new(Alphabet::new(self.dst.clone())?);
        let rules: Vec<(&str, &str)> = self.map.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        Ok(Morphism::from_strs(src, dst, &rules)?)
    }
}

/// Dense transition table: `transitions[state][digit]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaoJson {
    pub name: String,
    pub base: u32,
    pub states: Vec<String>,
    pub initial: usize,
    pub transitions: Vec<Vec<usize>>,
    pub outputs: Vec<u16>,
    pub output_alphabet: Vec<String>,
}

impl DfaoJson {
    pub fn from_dfao(a: &Dfao) -> Self {
        Self {
            name: a.name().to_string(),
            base: a.base(),
            states: a.states().to_vec(),
            initial: a.initial(),
            transitions: a.transitions().chunks(a.base() as usize).map(<[usize]>::to_vec).collect(),
            outputs: a.outputs().to_vec(),
            output_alphabet: a.output_alphabet().glyphs().to_vec(),
        }
    }

    pub fn to_dfao(&self) -> anyhow::Result<Dfao> {
        if let Some(row) = self.transitions.iter().find(|r| r.len() != self.base as usize) {
            anyhow::bail!("transition row has {} entries, expected {}", row.len(), self.base);
        }
        let delta = self.transitions.concat();
        let alpha = Arc::new(Alphabet::new(self.output_alphabet.clone())?);
        Ok(Dfao::new(
            self.name.clone(),
            self.base,
            self.states.clone(),
            self.initial,
            delta,
            self.outputs.clone(),
            alpha,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: i64,
    pub k: u64,
    pub m: i64,
}

/// `{"g": 16, "start": 0, "terms": [{"c": 4, "k": 8, "m": 1}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BbpJson {
    #[serde(default)]
    pub name: Option<String>,
    pub g: u32,
    #[serde(default)]
    pub start: u64,
    pub terms: Vec<TermJson>,
}

impl BbpJson {
    pub fn to_spec(&self) -> anyhow::Result<BbpSpec> {
        let terms = self.terms.iter().map(|t| BbpTerm { c: t.c, k: t.k, m: t.m }).collect();
        let name = self.name.clone().unwrap_or_else(|| "custom".to_string());
        Ok(BbpSpec::from_terms(name, self.g, self.start, terms)?)
    }
}
