//! Routes, extractors and the error body.

use std::collections::BTreeSet;
use std::sync::Arc;

use axum::extract::{FromRequest, FromRequestParts, Request, State};
use axum::http::request::Parts;
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::NaiveDate;
use meshat::indicators::DashboardSnapshot;
use meshat::{
    Action, ActorId, BlogOwner, ContractAnswers, DecisionTable, DeliverableId, DiscussionId, Error, GroupId,
    NewTask, Period, PostId, Resource, RuleId, SelfReportItem, Seq, SkillItem, SubjectId, TaskId, TaskUpdate,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::service::{Service, Snapshot};

/// Response header carrying the seq a payload was computed at.
pub const SEQ_HEADER: &str = "x-meshat-seq";

type Shared = Arc<Service>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub code: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rule_id: Option<RuleId>,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> ApiError {
        ApiError {
            status: status.as_u16(),
            code: code.into(),
            rule_id: None,
            message: message.into(),
        }
    }

    pub fn bad_request(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, "BadRequest", message)
    }

    pub fn unauthenticated() -> ApiError {
        ApiError::new(StatusCode::UNAUTHORIZED, "Unauthenticated", "missing, unknown or expired session")
    }

    pub fn unavailable(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "Unavailable", message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> ApiError {
        use Error::*;
        let status = match &e {
            Forbidden(_) => StatusCode::FORBIDDEN,
            NoCourse | UnknownActor(_) | UnknownGroup(_) | UnknownTask(_) | UnknownDeliverable(_) | UnknownPost(_)
            | UnknownDiscussion(_) | UnknownTag(_) | UnknownParent(_) | UnknownResource(_) | UnknownEventSeq(_)
            | UnknownContract(_) => StatusCode::NOT_FOUND,
            ContractLocked | CourseExists | AlreadyClosed | WrongCourseStatus(_) | RosterLocked | NotSubmitted
            | AlreadySubmitted | AlreadyAccepted | AlreadyPublished | AlreadyExists | DuplicateLabel(_)
            | StoreNotEmpty => StatusCode::CONFLICT,
            InvalidCalendar(_) | OutOfRange(_) | AdjustmentOutOfRange(_) | IncompleteRoster(_) | LeaderNotMember
            | TutorIsMember | DuplicateTutor | InvalidGroup(_) | CycleDetected | EmptyTags | InvalidTaxonomy(_)
            | InvalidInput(_) | InvalidConfig(_) => StatusCode::UNPROCESSABLE_ENTITY,
            SchemaMismatch { .. } | Io(_) | Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let rule_id = match &e {
            ContractLocked => Some(RuleId::R7),
            other => other.rule_id(),
        };
        ApiError {
            status: status.as_u16(),
            code: e.code().into(),
            rule_id,
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

type ApiResult = Result<Response, ApiError>;

fn with_seq<T: Serialize>(status: StatusCode, seq: Seq, body: T) -> Response {
    let mut r = (status, Json(body)).into_response();
    r.headers_mut().insert(SEQ_HEADER, HeaderValue::from(seq));
    r
}

fn read<T: Serialize>(snap: &Snapshot, value: meshat::Result<T>) -> ApiResult {
    Ok(with_seq(StatusCode::OK, snap.seq, value?))
}

fn created<T: Serialize>((value, seq): (T, Seq)) -> Response {
    with_seq(StatusCode::CREATED, seq, value)
}

fn updated<T: Serialize>((value, seq): (T, Seq)) -> Response {
    with_seq(StatusCode::OK, seq, value)
}

fn done(((), seq): ((), Seq)) -> Response {
    with_seq(StatusCode::OK, seq, serde_json::json!({ "seq": seq }))
}

/// JSON body whose rejection is a 400 in the usual error shape.
pub struct Body<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for Body<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, ApiError> {
        Json::<T>::from_request(req, state)
            .await
            .map(|Json(v)| Body(v))
            .map_err(|e| ApiError::bad_request(e.body_text()))
    }
}

pub struct Path<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned + Send> FromRequestParts<S> for Path<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, ApiError> {
        axum::extract::Path::<T>::from_request_parts(parts, state)
            .await
            .map(|axum::extract::Path(v)| Path(v))
            .map_err(|e| ApiError::bad_request(e.body_text()))
    }
}

pub struct Query<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequestParts<S> for Query<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, ApiError> {
        axum::extract::Query::<T>::from_request_parts(parts, state)
            .await
            .map(|axum::extract::Query(v)| Query(v))
            .map_err(|e| ApiError::bad_request(e.body_text()))
    }
}

/// The actor behind the bearer token.
pub struct Caller(pub ActorId);

impl FromRequestParts<Shared> for Caller {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, service: &Shared) -> Result<Self, ApiError> {
        let token = parts
            .headers
            .get(header::AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "))
            .ok_or_else(ApiError::unauthenticated)?;
        service
            .sessions
            .resolve(token.trim())
            .map(Caller)
            .ok_or_else(ApiError::unauthenticated)
    }
}

pub fn router(service: Shared) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/session", post(open_session))
        .route("/api/course", get(course))
        .route("/api/course/advance", post(advance))
        .route("/api/groups/{g}/dashboard", get(dashboard).post(dashboard_write))
        .route("/api/groups/{g}/tasks", get(tasks).post(tasks_write))
        .route("/api/groups/{g}/deliverables", get(deliverables))
        .route("/api/groups/{g}/deliverables/{d}/submit", post(submit))
        .route("/api/groups/{g}/deliverables/{d}/accept", post(accept))
        .route("/api/groups/{g}/deliverables/{d}/comment", post(comment))
        .route("/api/students/{s}/time", post(time_entry))
        .route("/api/students/{s}/frame-of-mind", post(frame_of_mind))
        .route("/api/students/{s}/metacog", get(metacog).post(metacog_write))
        .route("/api/tutor/view", get(tutor_view))
        .route("/api/blogs/{owner}/posts", get(blog).post(blog_write))
        .route("/api/blogs/group/{g}/posts/{p}/confirm", post(confirm_post))
        .route("/api/forum/discussions", get(forum).post(open_discussion))
        .route("/api/forum/discussions/{d}/reply", post(reply))
        .route("/api/forum/taxonomy", get(taxonomy).post(taxonomy_write))
        .route("/api/forum/search", get(search))
        .route("/api/contracts/{owner}", get(contract).post(contract_init))
        .route("/api/contracts/{owner}/revise", post(contract_revise))
        .route("/api/evaluations/group/{g}", get(evaluation).post(grade_group))
        .route("/api/evaluations/student/{s}", post(adjust_student))
        .route("/api/policy/decision-table", get(decision_table))
        .with_state(service)
}

async fn health(State(s): State<Shared>) -> Response {
    let seq = s.snapshot().seq;
    with_seq(StatusCode::OK, seq, serde_json::json!({ "status": "ok", "seq": seq }))
}

#[derive(Deserialize)]
struct Login {
    actor_id: ActorId,
    passcode: String,
}

async fn open_session(State(s): State<Shared>, Body(login): Body<Login>) -> ApiResult {
    let snap = s.snapshot();
    let actor = snap
        .platform
        .state()
        .actor(login.actor_id)
        .filter(|_| s.sessions.check_passcode(login.actor_id, &login.passcode))
        .ok_or_else(ApiError::unauthenticated)?;
    let session = s.sessions.open(actor.id);
    Ok(with_seq(
        StatusCode::CREATED,
        snap.seq,
        serde_json::json!({
            "token": session.token,
            "actor_id": actor.id,
            "role": actor.role,
            "expires_at": session.expires_at,
        }),
    ))
}

async fn course(State(s): State<Shared>, Caller(_): Caller) -> ApiResult {
    let snap = s.snapshot();
    let state = snap.platform.state();
    let course = state.course().ok_or(Error::NoCourse)?;
    read(
        &snap,
        Ok(serde_json::json!({
            "course": course,
            "groups": state.groups().collect::<Vec<_>>(),
            "actors": state.actors().collect::<Vec<_>>(),
            "questionnaire": snap.platform.questionnaire(),
        })),
    )
}

async fn advance(State(s): State<Shared>, Caller(me): Caller) -> ApiResult {
    Ok(updated(s.write(move |p| p.advance_course(me)).await?))
}

#[derive(Deserialize)]
struct PeriodQuery {
    period: Option<Period>,
    tutor: Option<ActorId>,
}

fn period_or_now(snap: &Snapshot, period: Option<Period>) -> Period {
    period.unwrap_or_else(|| Period::of(snap.platform.clock().now()))
}

async fn dashboard(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(g): Path<GroupId>,
    Query(q): Query<PeriodQuery>,
) -> ApiResult {
    let snap = s.snapshot();
    let period = period_or_now(&snap, q.period);
    let value = snap
        .platform
        .authorize_or_fail(me, Action::Read, &Resource::GroupDashboard(g))
        .and_then(|_| DashboardSnapshot::compute(snap.platform.state(), g, period));
    read(&snap, value)
}

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum DashboardOp {
    Skills { items: Vec<SkillItem> },
    Deliverable { title: String, due: NaiveDate },
}

async fn dashboard_write(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(g): Path<GroupId>,
    Body(op): Body<DashboardOp>,
) -> ApiResult {
    match op {
        DashboardOp::Skills { items } => Ok(done(s.write(move |p| p.set_skills(me, g, items)).await?)),
        DashboardOp::Deliverable { title, due } => {
            Ok(created(s.write(move |p| p.define_deliverable(me, g, &title, due)).await?))
        }
    }
}

async fn tasks(State(s): State<Shared>, Caller(me): Caller, Path(g): Path<GroupId>) -> ApiResult {
    let snap = s.snapshot();
    read(&snap, snap.platform.list_tasks(me, g))
}

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum TaskOp {
    Create(NewTask),
    Update { task_id: TaskId, update: TaskUpdate },
}

async fn tasks_write(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(g): Path<GroupId>,
    Body(op): Body<TaskOp>,
) -> ApiResult {
    match op {
        TaskOp::Create(task) => Ok(created(s.write(move |p| p.add_task(me, g, task)).await?)),
        TaskOp::Update { task_id, update } => {
            Ok(updated(s.write(move |p| p.update_task(me, g, task_id, update)).await?))
        }
    }
}

async fn deliverables(State(s): State<Shared>, Caller(me): Caller, Path(g): Path<GroupId>) -> ApiResult {
    let snap = s.snapshot();
    read(&snap, snap.platform.list_deliverables(me, g))
}

async fn submit(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path((g, d)): Path<(GroupId, DeliverableId)>,
) -> ApiResult {
    Ok(updated(s.write(move |p| p.submit_deliverable(me, g, d)).await?))
}

async fn accept(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path((g, d)): Path<(GroupId, DeliverableId)>,
) -> ApiResult {
    Ok(updated(s.write(move |p| p.accept_deliverable(me, g, d)).await?))
}

#[derive(Deserialize)]
struct Text {
    body: String,
}

async fn comment(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path((g, d)): Path<(GroupId, DeliverableId)>,
    Body(t): Body<Text>,
) -> ApiResult {
    Ok(updated(s.write(move |p| p.comment_deliverable(me, g, d, &t.body)).await?))
}

#[derive(Deserialize)]
struct TimeBody {
    date: NaiveDate,
    hours: f64,
}

async fn time_entry(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(student): Path<ActorId>,
    Body(b): Body<TimeBody>,
) -> ApiResult {
    Ok(created(s.write(move |p| p.record_time_entry(me, student, b.date, b.hours)).await?))
}

#[derive(Deserialize)]
struct FrameOfMind {
    period: Option<Period>,
    score: u8,
}

async fn frame_of_mind(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(student): Path<ActorId>,
    Body(b): Body<FrameOfMind>,
) -> ApiResult {
    let period = period_or_now(&s.snapshot(), b.period);
    Ok(done(s.write(move |p| p.record_frame_of_mind(me, student, period, b.score)).await?))
}

async fn metacog(State(s): State<Shared>, Caller(me): Caller, Path(student): Path<ActorId>) -> ApiResult {
    let snap = s.snapshot();
    read(&snap, snap.platform.metacognitive_profile(me, student))
}

#[derive(Deserialize)]
struct SelfReport {
    period: Option<Period>,
    items: Vec<SelfReportItem>,
}

async fn metacog_write(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(student): Path<ActorId>,
    Body(b): Body<SelfReport>,
) -> ApiResult {
    let period = period_or_now(&s.snapshot(), b.period);
    Ok(done(s.write(move |p| p.record_self_report(me, student, period, b.items)).await?))
}

async fn tutor_view(State(s): State<Shared>, Caller(me): Caller, Query(q): Query<PeriodQuery>) -> ApiResult {
    let snap = s.snapshot();
    let period = period_or_now(&snap, q.period);
    read(&snap, snap.platform.learning_view(me, q.tutor.unwrap_or(me), period))
}

fn blog_owner(raw: &str) -> Result<BlogOwner, ApiError> {
    raw.parse().map_err(|e: Error| ApiError::bad_request(e.to_string()))
}

async fn blog(State(s): State<Shared>, Caller(me): Caller, Path(owner): Path<String>) -> ApiResult {
    let owner = blog_owner(&owner)?;
    let snap = s.snapshot();
    read(&snap, snap.platform.read_blog(me, owner))
}

async fn blog_write(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(owner): Path<String>,
    Body(t): Body<Text>,
) -> ApiResult {
    let posted = match blog_owner(&owner)? {
        BlogOwner::Student(a) => s.write(move |p| p.write_student_post(me, a, &t.body)).await?,
        BlogOwner::Group(g) => s.write(move |p| p.propose_group_post(me, g, &t.body)).await?,
    };
    Ok(created(posted))
}

async fn confirm_post(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path((g, id)): Path<(GroupId, PostId)>,
) -> ApiResult {
    Ok(updated(
        s.write(move |p| {
            if p.state().post(id).map(|post| post.blog) != Some(BlogOwner::Group(g)) {
                return Err(Error::UnknownPost(format!("{id} in {g}")));
            }
            p.confirm_group_post(me, id)
        })
        .await?,
    ))
}

async fn forum(State(s): State<Shared>, Caller(me): Caller) -> ApiResult {
    let snap = s.snapshot();
    read(&snap, snap.platform.read_forum(me).map(|f| f.export()))
}

#[derive(Deserialize)]
struct NewDiscussion {
    title: String,
    body: String,
    tags: BTreeSet<SubjectId>,
}

async fn open_discussion(State(s): State<Shared>, Caller(me): Caller, Body(b): Body<NewDiscussion>) -> ApiResult {
    Ok(created(s.write(move |p| p.create_discussion(me, &b.title, &b.body, &b.tags)).await?))
}

async fn reply(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(d): Path<DiscussionId>,
    Body(t): Body<Text>,
) -> ApiResult {
    Ok(updated(s.write(move |p| p.reply(me, d, &t.body)).await?))
}

async fn taxonomy(State(s): State<Shared>, Caller(me): Caller) -> ApiResult {
    let snap = s.snapshot();
    read(&snap, snap.platform.read_taxonomy(me).map(|t| t.subjects().cloned().collect::<Vec<_>>()))
}

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum TaxonomyOp {
    Propose { parent: SubjectId, label: String },
    Rename { subject: SubjectId, label: String },
    Merge { from: SubjectId, into: SubjectId },
}

async fn taxonomy_write(State(s): State<Shared>, Caller(me): Caller, Body(op): Body<TaxonomyOp>) -> ApiResult {
    Ok(match op {
        TaxonomyOp::Propose { parent, label } => created(s.write(move |p| p.propose_subject(me, parent, &label)).await?),
        TaxonomyOp::Rename { subject, label } => updated(s.write(move |p| p.rename_subject(me, subject, &label)).await?),
        TaxonomyOp::Merge { from, into } => updated(s.write(move |p| p.merge_subjects(me, from, into)).await?),
    })
}

#[derive(Deserialize)]
struct TagQuery {
    #[serde(default)]
    tags: String,
}

async fn search(State(s): State<Shared>, Caller(me): Caller, Query(q): Query<TagQuery>) -> ApiResult {
    let tags = q
        .tags
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<SubjectId>())
        .collect::<Result<BTreeSet<_>, _>>()
        .map_err(|_| ApiError::bad_request(format!("tags `{}` is not a list of subject ids", q.tags)))?;
    let snap = s.snapshot();
    read(&snap, snap.platform.search_discussions(me, &tags))
}

async fn contract(State(s): State<Shared>, Caller(me): Caller, Path(owner): Path<ActorId>) -> ApiResult {
    let snap = s.snapshot();
    read(&snap, snap.platform.read_contract(me, owner))
}

async fn contract_init(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(owner): Path<ActorId>,
    Body(answers): Body<ContractAnswers>,
) -> ApiResult {
    Ok(created(s.write(move |p| p.init_learning_contract(me, owner, answers)).await?))
}

#[derive(Deserialize)]
struct Revision {
    answers: ContractAnswers,
    #[serde(default)]
    linked_seqs: Vec<Seq>,
}

async fn contract_revise(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(owner): Path<ActorId>,
    Body(r): Body<Revision>,
) -> ApiResult {
    Ok(updated(s.write(move |p| p.revise_learning_contract(me, owner, r.answers, r.linked_seqs)).await?))
}

async fn evaluation(State(s): State<Shared>, Caller(me): Caller, Path(g): Path<GroupId>) -> ApiResult {
    let snap = s.snapshot();
    read(&snap, snap.platform.read_evaluation(me, g))
}

#[derive(Deserialize)]
struct Grade {
    grade: f64,
}

async fn grade_group(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(g): Path<GroupId>,
    Body(b): Body<Grade>,
) -> ApiResult {
    Ok(done(s.write(move |p| p.evaluate_group(me, g, b.grade)).await?))
}

#[derive(Deserialize)]
struct Adjustment {
    adjustment: f64,
}

async fn adjust_student(
    State(s): State<Shared>,
    Caller(me): Caller,
    Path(student): Path<ActorId>,
    Body(b): Body<Adjustment>,
) -> ApiResult {
    Ok(done(s.write(move |p| p.evaluate_student(me, student, b.adjustment)).await?))
}

#[derive(Deserialize)]
struct TableQuery {
    format: Option<String>,
}

async fn decision_table(State(s): State<Shared>, Caller(_): Caller, Query(q): Query<TableQuery>) -> ApiResult {
    let snap = s.snapshot();
    let table = DecisionTable::build(snap.platform.state());
    match q.format.as_deref() {
        None | Some("json") => read(&snap, Ok(table.rows().collect::<Vec<_>>())),
        Some("csv") => {
            let mut out = Vec::new();
            table.write_csv(&mut out)?;
            let mut r = (StatusCode::OK, [(header::CONTENT_TYPE, "text/csv")], out).into_response();
            r.headers_mut().insert(SEQ_HEADER, HeaderValue::from(snap.seq));
            Ok(r)
        }
        Some(other) => Err(ApiError::bad_request(format!("unknown format `{other}`"))),
    }
}
