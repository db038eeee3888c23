//! One JSON object per line: `{"id", "method", "params"}` in, `{"id",
//! "result"}` or `{"id", "error": {"code", "message"}}` out.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{JobId, Service, SessionError, SessionId};

/// Longest a `poll` may block.
pub const MAX_WAIT_SECS: f64 = 60.0;

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "method", content = "params", rename_all = "camelCase")]
pub enum Request {
    Open {
        text: String,
    },
    Edit {
        session: SessionId,
        revision: u64,
        start: usize,
        end: usize,
        text: String,
    },
    CheckPrefix {
        session: SessionId,
        #[serde(default)]
        offset: Option<usize>,
    },
    GoalAt {
        session: SessionId,
        offset: usize,
    },
    HammerAt {
        session: SessionId,
        offset: usize,
        #[serde(default)]
        mode: Option<String>,
    },
    Poll {
        job: JobId,
        #[serde(default)]
        wait: Option<f64>,
    },
    Text {
        session: SessionId,
    },
    Close {
        session: SessionId,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResponseError {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Response {
    pub id: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ResponseError>,
}

impl Response {
    fn err(id: Value, code: &str, message: impl Into<String>) -> Self {
        Response {
            id,
            result: None,
            error: Some(ResponseError {
                code: code.into(),
                message: message.into(),
            }),
        }
    }
}

impl From<SessionError> for ResponseError {
    fn from(e: SessionError) -> Self {
        ResponseError {
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

fn dispatch(service: &Service, req: Request) -> Result<Value, ResponseError> {
    Ok(match req {
        Request::Open { text } => json!({ "session": service.open(&text), "revision": 0 }),
        Request::Edit {
            session,
            revision,
            start,
            end,
            text,
        } => json!({ "revision": service.edit(session, revision, start, end, &text)? }),
        Request::CheckPrefix { session, offset } => {
            serde_json::to_value(service.check_prefix(session, offset)?).expect("check serializes")
        }
        Request::GoalAt { session, offset } => {
            let (revision, goal) = service.goal_at(session, offset)?;
            json!({ "revision": revision, "rendered": goal.to_string(), "goal": goal })
        }
        Request::HammerAt {
            session,
            offset,
            mode,
        } => {
            if let Some(m) = mode.filter(|m| m != "chainy") {
                return Err(ResponseError {
                    code: "InvalidParams".into(),
                    message: format!("unsupported mode `{}`", m),
                });
            }
            let (job, revision) = service.hammer_at(session, offset)?;
            json!({ "job": job, "revision": revision })
        }
        Request::Poll { job, wait } => {
            let secs = wait.unwrap_or(0.0).clamp(0.0, MAX_WAIT_SECS);
            serde_json::to_value(service.poll(job, Duration::from_secs_f64(secs))?)
                .expect("status serializes")
        }
        Request::Text { session } => {
            let (revision, text) = service.text(session)?;
            json!({ "revision": revision, "text": text })
        }
        Request::Close { session } => {
            service.close(session)?;
            json!({})
        }
    })
}

/// Handles one request line and returns the response line (without newline).
pub fn handle_line(service: &Service, line: &str) -> String {
    let resp = match serde_json::from_str::<Value>(line) {
        Err(e) => Response::err(Value::Null, "ParseError", e.to_string()),
        Ok(Value::Object(mut obj)) => {
            let id = obj.remove("id").unwrap_or(Value::Null);
            match serde_json::from_value::<Request>(Value::Object(obj)) {
                Err(e) => Response::err(id, "InvalidRequest", e.to_string()),
                Ok(req) => match dispatch(service, req) {
                    Ok(result) => Response {
                        id,
                        result: Some(result),
                        error: None,
                    },
                    Err(error) => Response {
                        id,
                        result: None,
                        error: Some(error),
                    },
                },
            }
        }
        Ok(_) => Response::err(Value::Null, "InvalidRequest", "expected an object"),
    };
    serde_json::to_string(&resp).expect("response serializes")
}
