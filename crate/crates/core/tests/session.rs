mod common;

use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::path::Path;
use std::sync::Arc;
use std::thread;

use common::{mock, MINI};
use hammerforge::basis::{bootstrap, bootstrap_intuitionistic};
use hammerforge::driver::{Dialect, Schedule};
use hammerforge::kernel::Signature;
use hammerforge::session::{handle_line, serve_tcp, serve_ws, Service, ServiceConfig};
use serde_json::{json, Value};

const LSA_PROOF: &str = "exact ordinal_ordsucc alpha Ha.";

fn service(dir: &Path, base: Signature, table: &str) -> Service {
    let prover = mock(dir, "m", Dialect::Th0, table);
    Service::new(ServiceConfig {
        base,
        schedule: Schedule::even(vec![prover], 5.0),
        workdir: dir.join("work"),
    })
}

/// A scripted client speaking the line protocol.
struct Client<F: FnMut(&str) -> String> {
    send: F,
    next: u64,
}

impl<F: FnMut(&str) -> String> Client<F> {
    fn new(send: F) -> Self {
        Client { send, next: 0 }
    }

    fn raw(&mut self, method: &str, params: Value) -> Value {
        self.next += 1;
        let req = json!({ "id": self.next, "method": method, "params": params });
        let line = (self.send)(&req.to_string());
        let resp: Value = serde_json::from_str(&line).unwrap();
        assert_eq!(resp["id"], json!(self.next));
        resp
    }

    fn call(&mut self, method: &str, params: Value) -> Value {
        let resp = self.raw(method, params);
        assert!(resp.get("error").is_none(), "{}", resp);
        resp["result"].clone()
    }

    fn error_code(&mut self, method: &str, params: Value) -> String {
        let resp = self.raw(method, params);
        resp["error"]["code"]
            .as_str()
            .expect("an error")
            .to_string()
    }
}

/// The paper's workflow: open the corpus, empty the `Lsa` block, ask for the
/// goal there, hammer it, insert the answer and recheck. Returns every result.
fn workflow<F: FnMut(&str) -> String>(c: &mut Client<F>) -> Vec<Value> {
    let mut log = Vec::new();
    let opened = c.call("open", json!({ "text": MINI }));
    let s = opened["session"].clone();
    log.push(opened);

    let at = MINI.find(LSA_PROOF).unwrap();
    let edited = c.call(
        "edit",
        json!({ "session": s, "revision": 0, "start": at, "end": at + LSA_PROOF.len(), "text": "" }),
    );
    assert_eq!(edited["revision"], json!(1));
    log.push(edited);

    let before = c.call("checkPrefix", json!({ "session": s }));
    assert_eq!(
        before["diagnostics"].as_array().unwrap().len(),
        1,
        "{}",
        before
    );
    let holes_before = before["holes"].as_u64().unwrap();
    log.push(before);

    let goal = c.call("goalAt", json!({ "session": s, "offset": at }));
    assert_eq!(goal["goal"]["conclusion"], json!("ordinal (ordsucc alpha)"));
    assert_eq!(goal["goal"]["hyps"], json!([["Ha", "ordinal alpha"]]));
    log.push(goal);

    let job = c.call(
        "hammerAt",
        json!({ "session": s, "offset": at, "mode": "chainy" }),
    );
    let done = c.call("poll", json!({ "job": job["job"], "wait": 20 }));
    assert_eq!(done["status"], json!("done"), "{}", done);
    assert_eq!(done["abyText"], json!("aby ordinal_ordsucc Ha."));
    log.push(job);
    log.push(done.clone());

    let inserted = c.call(
        "edit",
        json!({ "session": s, "revision": 1, "start": at, "end": at, "text": done["abyText"] }),
    );
    log.push(inserted);
    let after = c.call("checkPrefix", json!({ "session": s }));
    assert_eq!(after["diagnostics"], json!([]), "{}", after);
    assert_eq!(after["holes"].as_u64().unwrap(), holes_before + 1);
    log.push(after);

    let text = c.call("text", json!({ "session": s }));
    assert_eq!(
        text["text"].as_str().unwrap(),
        MINI.replace(LSA_PROOF, "aby ordinal_ordsucc Ha.")
    );
    log.push(c.call("close", json!({ "session": s })));
    log
}

// Hypotheses are listed last whatever order the prover cites them in.
const TABLE: &str = r#"{"*": {"used": ["Ha", "ordinal_ordsucc"]}}"#;

#[test]
fn end_to_end_over_the_line_protocol() {
    let tmp = tempfile::tempdir().unwrap();
    let svc = service(tmp.path(), bootstrap(), TABLE);
    let mut c = Client::new(|l| handle_line(&svc, l));
    workflow(&mut c);
}

#[test]
fn identical_inputs_give_identical_responses() {
    let run = || {
        let tmp = tempfile::tempdir().unwrap();
        let svc = service(tmp.path(), bootstrap(), TABLE);
        let mut c = Client::new(|l| handle_line(&svc, l));
        workflow(&mut c)
    };
    assert_eq!(run(), run());
}

#[test]
fn seeded_type_error_gives_one_diagnostic() {
    let tmp = tempfile::tempdir().unwrap();
    let svc = service(tmp.path(), bootstrap(), TABLE);
    let mut c = Client::new(|l| handle_line(&svc, l));
    let bad = "ordinal ordsucc";
    let text = MINI.replacen("ordinal (ordsucc alpha).\n{", &format!("{}.\n{{", bad), 1);
    let at = text.find(bad).unwrap();
    let s = c.call("open", json!({ "text": text }))["session"].clone();
    let r = c.call("checkPrefix", json!({ "session": s, "offset": text.len() }));
    let d = r["diagnostics"].as_array().unwrap();
    assert_eq!(d.len(), 1, "{}", r);
    let (start, end) = (
        d[0]["start"].as_u64().unwrap() as usize,
        d[0]["end"].as_u64().unwrap() as usize,
    );
    assert!(
        at <= start && end <= at + bad.len(),
        "{} not inside {}..{}",
        r,
        at,
        at + bad.len()
    );

    // A prefix ending before the theorem with the error sees nothing wrong.
    let thm = text.find("Theorem ordinal_ordsucc_ordsucc").unwrap();
    let r = c.call("checkPrefix", json!({ "session": s, "offset": thm }));
    assert_eq!(r["diagnostics"], json!([]));
}

#[test]
fn goals_only_inside_proofs() {
    let tmp = tempfile::tempdir().unwrap();
    let svc = service(tmp.path(), bootstrap(), TABLE);
    let mut c = Client::new(|l| handle_line(&svc, l));
    let text = format!("(* preamble *)\n{}", MINI);
    let s = c.call("open", json!({ "text": text }))["session"].clone();
    assert_eq!(
        c.error_code("goalAt", json!({ "session": s, "offset": 3 })),
        "NoGoal"
    );
    let qed = text.find("Qed.").unwrap() + "Qed.".len();
    assert_eq!(
        c.error_code("goalAt", json!({ "session": s, "offset": qed + 1 })),
        "NoGoal"
    );
    let exact = text.find(LSA_PROOF).unwrap();
    let g = c.call("goalAt", json!({ "session": s, "offset": exact + 3 }));
    assert!(
        g["rendered"]
            .as_str()
            .unwrap()
            .ends_with("----\nordinal (ordsucc alpha)"),
        "{}",
        g
    );
}

#[test]
fn protocol_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let svc = service(tmp.path(), bootstrap(), TABLE);
    let mut c = Client::new(|l| handle_line(&svc, l));
    assert_eq!(
        c.error_code("goalAt", json!({ "session": 9, "offset": 0 })),
        "UnknownSession"
    );
    assert_eq!(c.error_code("poll", json!({ "job": 9 })), "UnknownJob");
    assert_eq!(c.error_code("frobnicate", json!({})), "InvalidRequest");
    let s = c.call("open", json!({ "text": "é" }))["session"].clone();
    let edit = |rev: u64, start: usize| json!({ "session": s, "revision": rev, "start": start, "end": start, "text": "x" });
    assert_eq!(c.error_code("edit", edit(0, 1)), "BadRange");
    assert_eq!(c.error_code("edit", edit(0, 5)), "BadRange");
    c.call("edit", edit(0, 0));
    assert_eq!(c.error_code("edit", edit(0, 0)), "StaleRevision");
    let at = MINI.find(LSA_PROOF).unwrap();
    let s2 = c.call("open", json!({ "text": MINI }))["session"].clone();
    assert_eq!(
        c.error_code(
            "hammerAt",
            json!({ "session": s2, "offset": at, "mode": "bushy" })
        ),
        "InvalidParams"
    );
    c.call("close", json!({ "session": s }));
    assert_eq!(
        c.error_code("close", json!({ "session": s })),
        "UnknownSession"
    );
    let garbage = handle_line(&svc, "not json");
    assert!(garbage.contains("ParseError"), "{}", garbage);
}

#[test]
fn hammer_before_the_frontier_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let svc = service(tmp.path(), bootstrap_intuitionistic(), r#"{"*": {}}"#);
    let mut c = Client::new(|l| handle_line(&svc, l));
    let text = "Theorem early : True.\nexact TrueI.\nQed.\n\
                Theorem xm : forall p:prop, p \\/ ~p.\naby.\nQed.\n\
                Theorem late : True.\nexact TrueI.\nQed.\n";
    let s = c.call("open", json!({ "text": text }))["session"].clone();
    let early = text.find("exact").unwrap();
    assert_eq!(
        c.error_code("hammerAt", json!({ "session": s, "offset": early })),
        "BeforeFrontier"
    );
    let late = text.rfind("exact").unwrap();
    let job = c.call("hammerAt", json!({ "session": s, "offset": late }));
    let done = c.call("poll", json!({ "job": job["job"], "wait": 20 }));
    assert_eq!(done["status"], json!("done"), "{}", done);
}

#[test]
fn exhausted_schedule_fails_with_attempts() {
    let tmp = tempfile::tempdir().unwrap();
    let svc = service(tmp.path(), bootstrap(), r#"{"*": {"status": "GaveUp"}}"#);
    let mut c = Client::new(|l| handle_line(&svc, l));
    let s = c.call("open", json!({ "text": MINI }))["session"].clone();
    let at = MINI.find(LSA_PROOF).unwrap();
    let job = c.call("hammerAt", json!({ "session": s, "offset": at }));
    let r = c.call("poll", json!({ "job": job["job"], "wait": 20 }));
    assert_eq!(r["status"], json!("failed"), "{}", r);
    assert_eq!(r["reason"], json!("schedule exhausted"));
    assert_eq!(r["attempts"][0]["szs"], json!("GaveUp"));
}

#[test]
fn results_for_old_revisions_are_discarded() {
    let tmp = tempfile::tempdir().unwrap();
    let svc = service(tmp.path(), bootstrap(), r#"{"*": {"sleep": 1.0}}"#);
    let mut c = Client::new(|l| handle_line(&svc, l));
    let s = c.call("open", json!({ "text": MINI }))["session"].clone();
    let at = MINI.find(LSA_PROOF).unwrap();
    let job = c.call("hammerAt", json!({ "session": s, "offset": at }));
    assert_eq!(
        c.call("poll", json!({ "job": job["job"] }))["status"],
        json!("running")
    );
    c.call(
        "edit",
        json!({ "session": s, "revision": 0, "start": 0, "end": 0, "text": " " }),
    );
    let r = c.call("poll", json!({ "job": job["job"], "wait": 20 }));
    assert_eq!(r, json!({ "status": "discarded", "revision": 0 }));
}

#[test]
fn tcp_transport() {
    let tmp = tempfile::tempdir().unwrap();
    let svc = Arc::new(service(tmp.path(), bootstrap(), TABLE));
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || serve_tcp(svc, listener));
    let stream = TcpStream::connect(addr).unwrap();
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut writer = stream;
    let mut c = Client::new(|l| {
        writeln!(writer, "{}", l).unwrap();
        let mut line = String::new();
        reader.read_line(&mut line).unwrap();
        line
    });
    workflow(&mut c);
}

#[test]
fn websocket_transport() {
    let tmp = tempfile::tempdir().unwrap();
    let svc = Arc::new(service(tmp.path(), bootstrap(), TABLE));
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || serve_ws(svc, listener));
    let (mut ws, _) = tungstenite::connect(format!("ws://{}", addr)).unwrap();
    let mut c = Client::new(|l| {
        ws.send(tungstenite::Message::text(l)).unwrap();
        loop {
            if let tungstenite::Message::Text(t) = ws.read().unwrap() {
                return t.to_string();
            }
        }
    });
    workflow(&mut c);
}
