pub mod arguments;
pub mod cases;
pub mod defeasible;
pub mod defeat_af;
pub mod lang;
pub mod oracle;
pub mod pipeline;
pub mod tableau;
