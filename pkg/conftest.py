import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "mathduels.settings")
django.setup()
