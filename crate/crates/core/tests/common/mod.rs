#![allow(dead_code)]

pub mod angular_oracle;
pub mod harmonics;
