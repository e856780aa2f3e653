//! Interpolants from local refutations in an arbitrary theory.
//!
//! A refutation of A and B is local when every inference step uses only
//! A-colorable or only B-colorable formulas. Cutting it at a coloring cut
//! yields an interpolation run: two provers taking turns, each deriving
//! shared formulas from its own input and the other prover's earlier
//! results. The run's implications form an interpolant.

pub mod bridge;
pub mod cut;
pub mod formula;
pub mod proof;
pub mod run;

pub use bridge::{euf_bridge, game_to_horn, Bridge};
pub use cut::{check_cut, coloring_cut, ColoringCut};
pub use formula::Formula;
pub use proof::{LeafOrigin, Node, NodeId, NodeKind, ProofBuilder, ProofTree};
pub use run::{play, run_from_cut, GameInterpolant, GameResult, Implication, InterpolationRun};
