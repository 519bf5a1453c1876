"""Command-line interface: ``tbt`` subcommands, CSV writers and run manifests."""
