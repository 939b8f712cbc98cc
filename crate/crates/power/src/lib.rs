//! Benchmark power system models: network data, power flow, machine
//! dynamics and numerical linearization.
