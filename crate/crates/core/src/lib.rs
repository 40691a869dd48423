//! Front-door reducibility for acyclic directed mixed graphs.
//!
//! Decides whether groups of variables can be collapsed so that the ordinary
//! front-door adjustment identifies a causal effect, searches for such
//! groupings, and checks the resulting formula numerically against exact
//! discrete structural causal models.

pub mod admg;
pub mod criterion;
pub mod error;
pub mod figures;
pub mod format;
pub mod generate;
pub mod msep;
pub mod scm;
pub mod search;

pub use admg::{Admg, CComponentPartition, NodeId, NodeSet};
pub use criterion::{
    candidate_mediator_region, check_backdoor, check_classic_frontdoor, check_fdr1, check_fdr2, check_fdr3,
    check_fdr_triple, project_to_frontdoor, shrink_to_ancestral, super_cause_universe, FdrReport, FdrTriple,
    ReducedGraph,
};
pub use error::{Error, Result};
pub use format::{parse_document, parse_graph, parse_model, serialize_graph, ArcKind, GraphDocument};
pub use msep::{
    latent_projection_dag, m_separated, rule1_precondition, rule2_precondition, rule3_precondition, LatentizedDag,
};
pub use search::{
    brute_force_triples, brute_force_triples_capped, enumerate_triples, enumerate_triples_with, eq10_bound,
    find_triple, find_triple_with, Enumeration, Execution, SearchOutcome, SearchStats,
};
pub use scm::{
    causal_effect, counterexample_search, eq11_reference_graph, equivalence_check, eval_eq11, fdr_adjustment,
    interventional_distribution, joint_distribution, random_scm, Cpt, DiscreteScm, Distribution, DoAssignment,
};
