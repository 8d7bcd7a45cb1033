"""
bsde-lab command-line entry point

Exit codes: 0 when every asserted property passed, 2 when a property
failed, 1 on usage or operational errors.
"""

import logging
import sys
from pathlib import Path

# Add shared modules to path
sys.path.append(str(Path(__file__).parent.parent.parent))

from shared.config.presets import describe_presets
from shared.errors import LabError, UsageError
from shared.generators import list_generators, list_terminals

from services.cli.commands import SERVICES
from services.cli.report_writer import build_document, emit_report
from services.cli.run_config import parse_config

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PROPERTY_FAILURE = 2


def print_registry():
    """List generator and terminal labels with short descriptions"""
    print("Generators:")
    for label, description in list_generators():
        print(f"  {label:16} {description}")
    print("Terminals:")
    for label, note in list_terminals():
        print(f"  {label:16} {note}")
    print("Expressions: expr:<expression> (see EXPRESSION_GUIDE.md)")
    for line in describe_presets():
        print(line)


def main(argv=None):
    """
    Run one subcommand

    Args:
        argv: Argument list without the program name (sys.argv[1:] if None)

    Returns:
        Process exit code
    """
    try:
        run_config = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(f"usage error ({e.key}): {e}", file=sys.stderr)
        return EXIT_ERROR

    if run_config.subcommand == "generators":
        print_registry()
        return EXIT_OK

    log_level = getattr(logging, str(run_config.log_level).upper(), None)
    if not isinstance(log_level, int):
        print(f"usage error (log_level): unknown logging level {run_config.log_level!r}", file=sys.stderr)
        return EXIT_ERROR

    service_class = SERVICES[run_config.subcommand]
    try:
        with service_class(output_dir=run_config.output_dir, log_to_file=run_config.log_file,
                           log_level=log_level) as service:
            try:
                results, tables, passed = service.execute(run_config)
                document = build_document(run_config, results, passed)
                emit_report(document, tables, run_config)
            except (LabError, OSError) as e:
                service.logger.log_error_with_context(e, context=run_config.subcommand)
                raise
    except UsageError as e:
        print(f"usage error ({e.key}): {e}", file=sys.stderr)
        return EXIT_ERROR
    except (LabError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except KeyboardInterrupt:
        print("\nRun stopped by user", file=sys.stderr)
        return EXIT_ERROR

    return EXIT_OK if passed else EXIT_PROPERTY_FAILURE


if __name__ == "__main__":
    sys.exit(main())
