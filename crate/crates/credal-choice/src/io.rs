//! JSON model files: a space, one model, and named events, gambles,
//! variables and option sets. Rationals travel as canonically reduced
//! strings, objects keep sorted keys, so output is byte-stable.

use crate::choice::ChoiceModel;
use crate::error::{Error, Result};
use crate::lp::Relation;
use crate::model::{Event, FiniteSpace, Gamble, OptionSet, Variable};
use crate::previsions::{ArchimedeanModel, CredalConstraint, CredalSet, LinearPrevision};
use crate::rational::{format_rat, parse_rat, Rat};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFileJson {
    pub space: Vec<String>,
    pub model: ModelJson,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub variables: BTreeMap<String, VariableJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub events: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gambles: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub option_sets: BTreeMap<String, Vec<BTreeMap<String, String>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelJson {
    Linear { pmf: BTreeMap<String, String> },
    Credal(CredalJson),
    LowerSet { members: Vec<CredalJson> },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CredalJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<ConstraintJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub coeffs: BTreeMap<String, String>,
    pub rel: String,
    pub rhs: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VariableJson {
    pub codomain: Vec<String>,
    /// Atom label → codomain label.
    pub assignment: BTreeMap<String, String>,
}

/// A fully resolved model file.
#[derive(Debug, Clone)]
pub struct ModelFile {
    pub space: Arc<FiniteSpace>,
    pub model: ChoiceModel,
    pub variables: BTreeMap<String, Variable>,
    pub events: BTreeMap<String, Event>,
    pub gambles: BTreeMap<String, Gamble>,
    pub option_sets: BTreeMap<String, OptionSet>,
}

fn atom_values(space: &Arc<FiniteSpace>, map: &BTreeMap<String, String>) -> Result<Vec<Rat>> {
    let mut values = vec![None; space.size()];
    for (label, raw) in map {
        let i = space
            .atom_index(label)
            .ok_or_else(|| Error::Parse(format!("unknown atom {label:?}")))?;
        values[i] = Some(parse_rat(raw).map_err(Error::Parse)?);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::Parse(format!("missing value for atom {:?}", space.atoms()[i])))
        })
        .collect()
}

pub fn parse_gamble(space: &Arc<FiniteSpace>, map: &BTreeMap<String, String>) -> Result<Gamble> {
    Gamble::new(space.clone(), atom_values(space, map)?)
}

fn parse_prevision(
    space: &Arc<FiniteSpace>,
    map: &BTreeMap<String, String>,
) -> Result<LinearPrevision> {
    LinearPrevision::new(space.clone(), atom_values(space, map)?)
}

fn parse_relation(s: &str) -> Result<Relation> {
    match s {
        ">=" => Ok(Relation::Ge),
        "=" | "==" => Ok(Relation::Eq),
        "<=" => Ok(Relation::Le),
        other => Err(Error::Parse(format!("unknown relation {other:?}"))),
    }
}

fn relation_str(rel: Relation) -> &'static str {
    match rel {
        Relation::Ge => ">=",
        Relation::Eq => "=",
        Relation::Le => "<=",
    }
}

fn parse_credal(space: &Arc<FiniteSpace>, json: &CredalJson) -> Result<CredalSet> {
    let constraints = json
        .constraints
        .iter()
        .map(|c| {
            Ok(CredalConstraint {
                coeffs: atom_values(space, &c.coeffs)?,
                rel: parse_relation(&c.rel)?,
                rhs: parse_rat(&c.rhs).map_err(Error::Parse)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if json.vertices.is_empty() {
        if json.constraints.is_empty() {
            return Err(Error::Parse("credal model needs vertices or constraints".into()));
        }
        return CredalSet::from_constraints(space.clone(), constraints);
    }
    let vertices = json
        .vertices
        .iter()
        .map(|v| parse_prevision(space, v))
        .collect::<Result<Vec<_>>>()?;
    let set = CredalSet::from_vertices(space.clone(), vertices)?;
    if constraints.is_empty() {
        Ok(set)
    } else {
        set.with_constraints(constraints)
    }
}

pub fn resolve(json: &ModelFileJson) -> Result<ModelFile> {
    let space = FiniteSpace::new(json.space.clone())?;
    let model = match &json.model {
        ModelJson::Linear { pmf } => ChoiceModel::Linear(parse_prevision(&space, pmf)?),
        ModelJson::Credal(c) => ChoiceModel::Credal(parse_credal(&space, c)?),
        ModelJson::LowerSet { members } => {
            let members = members
                .iter()
                .map(|m| parse_credal(&space, m))
                .collect::<Result<Vec<_>>>()?;
            ChoiceModel::LowerSet(ArchimedeanModel::new(members)?)
        }
    };
    let mut variables = BTreeMap::new();
    for (name, v) in &json.variables {
        let assignment = space
            .atoms()
            .iter()
            .map(|a| {
                v.assignment
                    .get(a)
                    .cloned()
                    .ok_or_else(|| Error::Parse(format!("variable {name:?} misses atom {a:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        variables.insert(
            name.clone(),
            Variable::new(space.clone(), v.codomain.clone(), &assignment)?,
        );
    }
    let mut events = BTreeMap::new();
    for (name, labels) in &json.events {
        events.insert(
            name.clone(),
            Event::from_labels(space.clone(), labels.iter().map(String::as_str))?,
        );
    }
    let mut gambles = BTreeMap::new();
    for (name, map) in &json.gambles {
        gambles.insert(name.clone(), parse_gamble(&space, map)?);
    }
    let mut option_sets = BTreeMap::new();
    for (name, list) in &json.option_sets {
        let gs = list
            .iter()
            .map(|m| parse_gamble(&space, m))
            .collect::<Result<Vec<_>>>()?;
        option_sets.insert(name.clone(), OptionSet::new(space.clone(), gs)?);
    }
    Ok(ModelFile { space, model, variables, events, gambles, option_sets })
}

pub fn parse_model_file(text: &str) -> Result<ModelFile> {
    let json: ModelFileJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    resolve(&json)
}

// ------------------------------------------------------------- serializers

pub fn gamble_json(g: &Gamble) -> BTreeMap<String, String> {
    g.space()
        .atoms()
        .iter()
        .zip(g.values())
        .map(|(a, v)| (a.clone(), format_rat(v)))
        .collect()
}

pub fn event_json(e: &Event) -> Vec<String> {
    e.members()
        .iter()
        .map(|&i| e.space().atoms()[i].clone())
        .collect()
}

pub fn option_set_json(a: &OptionSet) -> Vec<BTreeMap<String, String>> {
    a.iter().map(gamble_json).collect()
}

fn prevision_json(p: &LinearPrevision) -> BTreeMap<String, String> {
    p.space()
        .atoms()
        .iter()
        .zip(p.pmf())
        .map(|(a, v)| (a.clone(), format_rat(v)))
        .collect()
}

fn credal_json(m: &CredalSet) -> CredalJson {
    let vertices = m
        .vertices()
        .map(|vs| vs.iter().map(prevision_json).collect())
        .unwrap_or_default();
    let constraints = m
        .constraints()
        .unwrap_or_default()
        .iter()
        .map(|c| ConstraintJson {
            coeffs: m
                .space()
                .atoms()
                .iter()
                .zip(&c.coeffs)
                .map(|(a, v)| (a.clone(), format_rat(v)))
                .collect(),
            rel: relation_str(c.rel).to_string(),
            rhs: format_rat(&c.rhs),
        })
        .collect();
    CredalJson { vertices, constraints }
}

pub fn model_json(model: &ChoiceModel) -> ModelJson {
    match model {
        ChoiceModel::Linear(p) => ModelJson::Linear { pmf: prevision_json(p) },
        ChoiceModel::Credal(m) => ModelJson::Credal(credal_json(m)),
        ChoiceModel::LowerSet(s) => ModelJson::LowerSet {
            members: s.members().iter().map(credal_json).collect(),
        },
    }
}

/// A model file for a bare model, without named objects.
pub fn model_file_json(model: &ChoiceModel) -> ModelFileJson {
    ModelFileJson {
        space: model.space().atoms().to_vec(),
        model: model_json(model),
        variables: BTreeMap::new(),
        events: BTreeMap::new(),
        gambles: BTreeMap::new(),
        option_sets: BTreeMap::new(),
    }
}
