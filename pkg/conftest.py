import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'conedeform.settings')
django.setup()
