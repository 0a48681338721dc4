"""Tables and input checks behind the dashboard and the report."""
