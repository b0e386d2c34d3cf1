use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    /// A core routine rejected the input or the job. `stage` names the module
    /// the error came from.
    #[error("{stage}: {source}")]
    Core {
        stage: &'static str,
        #[source]
        source: selfdual::Error,
    },
}

impl CliError {
    pub fn schema(path: &str, message: impl Into<String>) -> CliError {
        CliError::Schema {
            path: path.to_string(),
            message: message.into(),
        }
    }

    pub fn core(stage: &'static str) -> impl Fn(selfdual::Error) -> CliError + Copy {
        move |source| CliError::Core { stage, source }
    }

    /// 0 success, 1 usage, 2 parse, 3 validation, 4 resource cap.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } => 1,
            CliError::Syntax { .. } | CliError::Schema { .. } => 2,
            CliError::Core { source, .. } => match source {
                selfdual::Error::ParseScalar(_) => 2,
                selfdual::Error::CochainCap { .. } => 4,
                _ => 3,
            },
        }
    }

    pub fn exit(&self) -> ExitCode {
        ExitCode::from(self.exit_code())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        let text = e.to_string();
        let message = match text.rsplit_once(" at line ") {
            Some((m, _)) => m.to_string(),
            None => text,
        };
        CliError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(CliError::schema("$", "x").exit_code(), 2);
        let cap = selfdual::Error::CochainCap {
            degree: 3,
            size: 10,
            cap: 1,
        };
        assert_eq!(CliError::core("hochschild")(cap).exit_code(), 4);
        assert_eq!(CliError::core("input")(selfdual::Error::NotPrime(4)).exit_code(), 3);
        assert_eq!(
            CliError::core("input")(selfdual::Error::ParseScalar("z".into())).exit_code(),
            2
        );
    }

    #[test]
    fn syntax_position() {
        let e: CliError = serde_json::from_str::<serde_json::Value>("{\n  \"a\": ,\n}")
            .unwrap_err()
            .into();
        match e {
            CliError::Syntax { line, column, ref message } => {
                assert_eq!((line, column), (2, 8));
                assert!(!message.contains("line"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }
}
