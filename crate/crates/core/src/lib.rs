pub mod comparison;
pub mod config;
pub mod constants;
pub mod device;
pub mod lab;
pub mod metrics;
pub mod network;
mod quadrature;
pub mod report;
pub mod spectrum;
pub mod sweep;
