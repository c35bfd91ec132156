//! Storage and repair-bandwidth capacity of clustered distributed storage
//! systems with separate nodes.
//!
//! The crate evaluates the min-cut of information flow graphs in closed form
//! ([`mincut`]), constructs the capacity-achieving repair sequences
//! ([`optimal`]), cross-checks both against literal graphs and exact max-flow
//! ([`flow`]), derives storage/bandwidth tradeoff curves ([`tradeoff`]), and
//! simulates an interference-alignment MSR code for six nodes in two
//! clusters ([`ia`]).

pub mod error;
pub mod flow;
pub mod gf256;
pub mod ia;
pub mod mincut;
pub mod optimal;
pub mod params;
pub mod rational;
pub mod tradeoff;

pub use error::Error;
pub use flow::{brute_force_capacity, build_ifg, max_flow, FlowGraph, HelperPolicy, IfgOptions};
pub use mincut::{
    cut_profile, enumerate_distributions, enumerate_orders, relative_locations, ClusterOrder, CutProfile,
    SelectedDistribution,
};
pub use optimal::{
    capacity, capacity_no_separate, capacity_one_separate, horizontal_selection, vertical_order, CapacityResult,
};
pub use params::{admissible_dc_range, validate, FileSize, RepairParams, SystemParams, ValidationReport};
pub use rational::Rational;
