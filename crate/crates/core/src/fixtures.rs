//! The shipped example data, embedded at compile time.

use crate::graphs::{GraphFile, WeightedDigraph};
use crate::error::Result;
use crate::io::{parse_json, StructureJson};
use crate::splitdirac::{CausalPotential, MvsFile, SplitDiracStructure, SplitFile};

macro_rules! fixture {
    ($name:ident, $file:literal) => {
        pub const $name: &str = include_str!(concat!("../../../fixtures/", $file));
    };
}

fixture!(C2, "c2.json");
fixture!(S0, "s0.json");
fixture!(S6, "s6.json");
fixture!(FIG1, "fig1.json");
fixture!(FIG2_LEFT, "fig2_left.json");
fixture!(FIG2_RIGHT, "fig2_right.json");
fixture!(SINGLE_EDGE, "single_edge.json");
fixture!(SPLIT_SINGLE_EDGE, "split_single_edge.json");
fixture!(BOOST_TRIANGLE, "boost_triangle.json");
fixture!(ROTATION_TRIANGLE, "rotation_triangle.json");
fixture!(MIXED4, "mixed4.json");
fixture!(FIGSC, "figsc.json");
fixture!(FIGSC_POTENTIAL, "figsc_potential.json");
fixture!(MVS_FLAT, "mvs_flat.json");
fixture!(MVS_NONREGULAR, "mvs_nonregular.json");

pub fn graph(text: &str) -> Result<WeightedDigraph> {
    parse_json::<GraphFile>(text)?.into_graph()
}

pub fn structure(text: &str) -> Result<StructureJson> {
    parse_json(text)
}

pub fn split(text: &str) -> Result<SplitDiracStructure> {
    parse_json::<SplitFile>(text)?.into_structure()
}

pub fn mvs(text: &str) -> Result<MvsFile> {
    parse_json(text)
}

/// A potential file: `{"f": [...], "h": [...]}` with rational strings.
pub fn potential(text: &str) -> Result<CausalPotential> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct PotentialFile {
        f: Vec<crate::graphs::RationalText>,
        h: Vec<crate::graphs::RationalText>,
    }
    let p: PotentialFile = parse_json(text)?;
    Ok(CausalPotential {
        f: p.f.iter().map(|x| x.parse()).collect::<Result<_>>()?,
        h: p.h.iter().map(|x| x.parse()).collect::<Result<_>>()?,
    })
}
