//! Quantitative repair of Kripke structures against ω-regular
//! specifications.
//!
//! A repair machine rewrites the traces of a Kripke structure at a cost. The
//! crate builds the product of structure, machine and a Büchi automaton,
//! solves the resulting Büchi, discounted and mean-payoff games exactly, and
//! synthesizes masks of robust traces.

#![no_std]

extern crate alloc;

pub mod aggregator;
pub mod automata;
pub mod complement;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod impair;
pub mod lasso;
pub mod mask;
pub mod membership;
pub mod oracle;
pub mod product;
pub mod rational;
pub mod repair;
pub mod solvers;
pub mod strategy;
pub mod threshold;

pub use aggregator::{eval_aggregator, Aggregator};
pub use automata::{
    kripke_to_nba, validate, Alphabet, Diagnostics, KripkeStructure, Model, Nba, RepairMachine, RmTransition,
    Symbol,
};
pub use error::{Error, Result};
pub use graph::WeightedGraph;
pub use impair::{impair_threshold, impair_witness, ImpairWitness};
pub use lasso::Lasso;
pub use membership::lasso_membership;
pub use product::{build_arena, build_product, GameArena, ProductGraph, ProductOptions, ProductVertex};
pub use rational::{Rational, Threshold};
pub use repair::{repair_strategy, repair_threshold};
pub use strategy::{ExitRule, FiniteMemoryStrategy, Mode};
pub use threshold::{Attainment, Interval, MemoryClass, Orientation, ThresholdResult};
