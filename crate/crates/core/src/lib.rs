#![allow(clippy::needless_range_loop)]

pub mod cc_filter;
pub mod cli_frontend;
pub mod coleman_tiny;
pub mod curve_model;
pub mod glc_engine;
pub mod mumford_jacobian;
pub mod ring_tower;
