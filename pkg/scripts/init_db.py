#!/usr/bin/env python3
"""
MEV-ACE Lab Archive Initialization Script

This script creates the archive database tables and can seed them with a
registry snapshot previously written by ``IdentityRegistry.export_json``.

Usage:
    python scripts/init_db.py [--drop-existing] [--snapshot path] [--run-label label]
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

# Add the parent directory to the path so we can import from app
sys.path.append(str(Path(__file__).parent.parent))

from app.crud import load_registry, save_registry
from app.database import SessionLocal, check_database_connection, create_tables, drop_tables, get_database_url
from app.models import IdentityRow, SlashEventRow, SlotOutcomeRow
from app.services.identity import IdentityRegistry


class ArchiveInitializer:
    """Imports registry snapshots into the archive under a run label."""

    def __init__(self, run_label: str, session=None):
        self.run_label = run_label
        self.session = session
        self._owns_session = session is None

    def __enter__(self):
        if self.session is None:
            self.session = SessionLocal()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self._owns_session and self.session is not None:
            self.session.close()

    def load_snapshot(self, file_path: str) -> IdentityRegistry:
        """
        Load a registry snapshot from a JSON file.

        Raises:
            FileNotFoundError: If the file does not exist
            app.exceptions.ValidationError: If an idcom does not match its key
        """
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"Snapshot file not found: {file_path}")
        print(f"Loading snapshot from: {file_path}")
        registry = IdentityRegistry.import_json(path.read_text(encoding="utf-8"))
        print(f"Loaded {len(registry)} identities")
        return registry

    def import_registry(self, registry: IdentityRegistry) -> int:
        if not registry.check_conservation():
            raise ValueError("snapshot violates bond conservation")
        return save_registry(self.session, registry, self.run_label)

    def validate(self) -> Dict[str, Any]:
        """Count archived rows and re-check conservation of the imported registry."""
        identities = self.session.query(IdentityRow).filter(IdentityRow.run_label == self.run_label).count()
        slashes = (
            self.session.query(SlashEventRow)
            .join(IdentityRow)
            .filter(IdentityRow.run_label == self.run_label)
            .count()
        )
        outcomes = self.session.query(SlotOutcomeRow).filter(SlotOutcomeRow.run_label == self.run_label).count()
        conserved = load_registry(self.session, self.run_label).check_conservation() if identities else True
        print("Archive contains:")
        print(f"  - {identities} identities")
        print(f"  - {slashes} slash events")
        print(f"  - {outcomes} slot outcomes")
        return {"identities": identities, "slash_events": slashes, "slot_outcomes": outcomes, "conserved": conserved}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main function to run the archive initialization."""
    parser = argparse.ArgumentParser(description="Initialize the MEV-ACE Lab archive database")
    parser.add_argument("--drop-existing", action="store_true",
                        help="Drop existing tables before creating new ones")
    parser.add_argument("--snapshot", type=str, default=None,
                        help="Registry snapshot JSON to import")
    parser.add_argument("--run-label", type=str, default="imported",
                        help="Run label for the imported snapshot")
    args = parser.parse_args(argv)

    print("MEV-ACE Lab Archive Initialization")
    print("=" * 40)

    if not check_database_connection():
        print(f"\n❌ Cannot connect to {get_database_url()}")
        return 1

    if args.drop_existing:
        print("Dropping existing tables...")
        drop_tables()

    print("Creating database tables...")
    create_tables()

    if args.snapshot:
        try:
            with ArchiveInitializer(args.run_label) as initializer:
                initializer.import_registry(initializer.load_snapshot(args.snapshot))
                report = initializer.validate()
        except Exception as e:
            print(f"\n❌ Snapshot import failed: {e}")
            return 1
        if not report["conserved"]:
            print("\n❌ Archived registry violates bond conservation!")
            return 1

    print("\n✅ Archive initialization completed successfully!")
    print(f"Database: {get_database_url()}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
