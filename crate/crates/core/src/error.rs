use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown action `{0}`")]
    UnknownAction(String),

    #[error("action `{action}` is not available in state `{state}`")]
    ActionUnavailable { state: String, action: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid history: {0}")]
    InvalidHistory(String),

    #[error("initial load {load} is outside [0, {capacity}]")]
    LoadOutOfRange { load: u64, capacity: u64 },

    #[error("arithmetic overflow while summing consumption")]
    Overflow,

    #[error("unfolding would create {estimate} nodes, above the limit of {limit}")]
    TooLarge { estimate: u128, limit: u64 },

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}
