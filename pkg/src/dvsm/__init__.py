"""Dance-video semantic annotation: typed entity graph, spatio-temporal
relation algebra, constraint validation, queries, persistence, service
and CLI."""

from .algebra import (
    ALLEN_DISJOINT,
    ALLEN_INVERSE,
    AllenRelation,
    DirRelation,
    MotionParams,
    MotionRelation,
    TopoRelation,
    allen_relation,
    directional_relation,
    distance_at,
    interpolate,
    motion_relation,
    topological_relation,
)
from .errors import (
    CycleError,
    DanglingIdError,
    DuplicateIdError,
    DvsmError,
    EmptyFilterError,
    InvalidValueError,
    LifespanContainmentError,
    MatrixViolationError,
    NoOverlapError,
    OwnerMismatchError,
    ParseError,
    SchemaError,
    StaleRevisionError,
    UnknownActorError,
    UnknownEventError,
    VersionUnsupportedError,
)
from .graph import (
    COMPATIBILITY,
    RelationCategory,
    RelationLabel,
    Relationship,
    add_relationship,
    export_dot,
    is_acyclic,
    permitted_categories,
)
from .model import (
    Actor,
    Agent,
    AgentVocabulary,
    AnnotationDocument,
    Box,
    ConceptEntity,
    ConceptKind,
    DanceEvent,
    Dancer,
    EntityKind,
    Interval,
    MacroFeatures,
    MediaLocator,
    ObjectEntity,
    RecordingContext,
    Scene,
    Sex,
    Song,
    SongPart,
    SongPartKind,
    Speed,
    Trajectory,
    TrajectoryPoint,
    ValidationReport,
    VenueType,
    VideoType,
    add_entity,
    exists_at,
    new_document,
    scene_grouping,
)
from .queries import (
    QueryResult,
    find_events,
    follows,
    infer_actor_relations,
    observe,
    perform_different_step,
    perform_same_step,
    repeats,
)
from .storage import (
    FORMAT_VERSION,
    documents_equal,
    load_document,
    load_file,
    save_document,
    save_file,
)
from .validation import validate_document

__all__ = [name for name in dir() if not name.startswith("_")]
