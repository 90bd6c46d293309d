"""Shared base class for the toolchain's expected failure modes."""


class CpskgError(Exception):
    """Base for all domain errors (parse failures, structural violations, ...).

    The CLI maps these to exit code 1; genuine I/O problems stay OSError
    and map to exit code 2.
    """
