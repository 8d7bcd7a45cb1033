"""
Command-line front end: configuration, subcommand services and report emission
"""
