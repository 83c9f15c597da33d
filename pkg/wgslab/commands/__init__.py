# wgslab subcommand handlers
