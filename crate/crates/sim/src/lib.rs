//! Fixed-step time-domain simulation with exact transport delay,
//! response metrics and delay sweeps.
