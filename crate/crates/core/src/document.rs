//! JSON game documents: either a hierarchical spec `{kind, n, k}` or an
//! explicit game `{universe, min_winning}` with per-level counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::ExplicitGame;
use crate::hierarchy::{HierSpec, Kind};
use crate::multiset::{Coalition, Multiset};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_winning: Option<Vec<Vec<u32>>>,
}

/// A validated document body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameForm {
    Hierarchical(HierSpec),
    Explicit(ExplicitGame),
}

impl GameForm {
    pub fn realize(&self) -> Result<ExplicitGame> {
        match self {
            GameForm::Hierarchical(s) => s.realize(),
            GameForm::Explicit(g) => Ok(g.clone()),
        }
    }
}

impl GameDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: GameDocument =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn from_spec(spec: &HierSpec) -> Self {
        GameDocument {
            kind: Some(spec.kind()),
            n: Some(spec.n().to_vec()),
            k: Some(spec.k().to_vec()),
            ..Self::default()
        }
    }

    pub fn from_game(game: &ExplicitGame) -> Self {
        GameDocument {
            universe: Some(game.universe().counts().to_vec()),
            min_winning: Some(
                game.min_winning()
                    .iter()
                    .map(|c| c.counts().to_vec())
                    .collect(),
            ),
            ..Self::default()
        }
    }

    /// Copies `name` and `notes` from another document.
    pub fn with_metadata_of(mut self, other: &GameDocument) -> Self {
        self.name = other.name.clone();
        self.notes = other.notes.clone();
        self
    }

    pub fn validate(&self) -> Result<GameForm> {
        let hier = self.kind.is_some() || self.n.is_some() || self.k.is_some();
        let explicit = self.universe.is_some() || self.min_winning.is_some();
        match (hier, explicit) {
            (true, true) => Err(Error::Document(
                "document mixes the {kind, n, k} and {universe, min_winning} forms".into(),
            )),
            (false, false) => Err(Error::Document(
                "document needs either {kind, n, k} or {universe, min_winning}".into(),
            )),
            (true, false) => {
                let (Some(kind), Some(n), Some(k)) = (self.kind, &self.n, &self.k) else {
                    return Err(Error::Document("kind, n and k are all required".into()));
                };
                Ok(GameForm::Hierarchical(HierSpec::new(kind, n.clone(), k.clone())?))
            }
            (false, true) => {
                let (Some(u), Some(mw)) = (&self.universe, &self.min_winning) else {
                    return Err(Error::Document(
                        "universe and min_winning are both required".into(),
                    ));
                };
                let universe = Multiset::new(u.clone())?;
                let coalitions = mw.iter().map(|c| Coalition::from_counts(c.clone())).collect();
                Ok(GameForm::Explicit(ExplicitGame::new(universe, coalitions)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hierarchical_round_trip() {
        let text = r#"{"name":"example","kind":"disjunctive","n":[3,3,3],"k":[2,3,5]}"#;
        let doc = GameDocument::parse(text).unwrap();
        assert_eq!(GameDocument::parse(&doc.to_json()).unwrap(), doc);
        match doc.validate().unwrap() {
            GameForm::Hierarchical(s) => {
                assert_eq!(s, HierSpec::disjunctive(vec![3, 3, 3], vec![2, 3, 5]).unwrap())
            }
            f => panic!("{f:?}"),
        }
    }

    #[test]
    fn explicit_round_trip() {
        let text = r#"{"universe":[1,1,1,1],"min_winning":[[1,1,0,0],[0,0,1,1]],"notes":"x"}"#;
        let doc = GameDocument::parse(text).unwrap();
        assert_eq!(GameDocument::parse(&doc.to_json()).unwrap(), doc);
        let GameForm::Explicit(g) = doc.validate().unwrap() else {
            panic!()
        };
        let mut emitted = GameDocument::from_game(&g).min_winning.unwrap();
        let mut given = doc.min_winning.clone().unwrap();
        emitted.sort();
        given.sort();
        assert_eq!(emitted, given);
    }

    #[test]
    fn rejects_bad_documents() {
        for bad in [
            r#"{"kind":"disjunctive","n":[3],"k":[2],"universe":[3],"min_winning":[[2]]}"#,
            r#"{"name":"empty"}"#,
            r#"{"kind":"disjunctive","n":[3]}"#,
            r#"{"kind":"sideways","n":[3],"k":[2]}"#,
            r#"{"kind":"disjunctive","n":[3],"k":[2],"extra":1}"#,
            r#"{"universe":[2],"min_winning":[[3]]}"#,
            r#"{"kind":"disjunctive","n":[2,2],"k":[3,2]}"#,
        ] {
            assert!(GameDocument::parse(bad).is_err(), "{bad}");
        }
    }
}
