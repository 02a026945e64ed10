# Generated by Django 5.2.6 on 2026-10-19 10:12

import uuid

from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="CertificateRecord",
            fields=[
                (
                    "id",
                    models.UUIDField(
                        default=uuid.uuid4,
                        editable=False,
                        primary_key=True,
                        serialize=False,
                        unique=True,
                    ),
                ),
                ("case", models.CharField(max_length=200)),
                ("diagram", models.CharField(max_length=500)),
                ("subset", models.JSONField(default=list)),
                (
                    "method",
                    models.CharField(
                        choices=[
                            ("direct-commutator", "direct commutator scan"),
                            ("cor2.6", "decomposition search"),
                            ("prop2.7", "heap certificate"),
                            ("star-pattern", "heap pattern predicate"),
                            ("claim1", "two removed nodes"),
                            ("automorphism", "opposition automorphism"),
                            ("lift", "bond increase"),
                        ],
                        max_length=30,
                    ),
                ),
                (
                    "verdict",
                    models.CharField(
                        choices=[
                            ("noncommutative", "noncommutative"),
                            ("commutative", "commutative"),
                            ("commutative-up-to-bound", "commutative up to bound"),
                            ("inconclusive", "inconclusive"),
                        ],
                        max_length=30,
                    ),
                ),
                ("evidence", models.JSONField(default=dict)),
                ("rechecked", models.BooleanField(default=False)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ["case", "-created_at"],
            },
        ),
    ]
