"""Python bindings for the weavetex LaTeX computation preprocessor."""

from ._weavetex import (
    Directive,
    Job,
    JobPlan,
    ResultRecord,
    ResultSet,
    Resolved,
    WeavetexError,
    build,
    builtin_eval,
    census,
    execute_builtin,
    includegraphics_text,
    plan,
    resolve_formats,
    scan,
    splice,
)

__all__ = [
    "Directive",
    "Job",
    "JobPlan",
    "ResultRecord",
    "ResultSet",
    "Resolved",
    "WeavetexError",
    "build",
    "builtin_eval",
    "census",
    "execute_builtin",
    "includegraphics_text",
    "plan",
    "resolve_formats",
    "scan",
    "splice",
]
