//! Weightedness and rough weightedness of hierarchical simple games.
//!
//! Games live on multisets of players (one count per level). Hierarchical
//! games are classified by closed-form case analysis in [`classifier`] and
//! every verdict can be cross-checked against the exact-rational feasibility
//! oracle in [`oracle`].

pub mod cert;
pub mod classifier;
pub mod document;
pub mod error;
pub mod game;
pub mod hierarchy;
pub mod lp;
pub mod multiset;
pub mod oracle;
pub mod structural;
pub mod sweep;
pub mod transforms;

pub use cert::RoughCert;
pub use classifier::{classify_rough, classify_weighted, synthesize_certificate, Case, Verdict};
pub use document::{GameDocument, GameForm};
pub use error::{Error, Result};
pub use game::{ExplicitGame, LevelRelation, SpecialPlayers};
pub use hierarchy::{CanonReport, HierSpec, Kind};
pub use multiset::{Coalition, Multiset};
pub use oracle::{Class, Mode};
